#include "obtuselab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "obtuselab/numerics.hpp"

namespace obtuselab::cli {

using num::pi;

// ------------------------------------------------------------------- Json

void Json::set(const std::string& key, Json value) {
  if (!is_object()) node_ = Object{};
  auto& obj = std::get<Object>(node_);
  for (auto& [k, v] : obj) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  obj.emplace_back(key, std::move(value));
}

void Json::push_back(Json value) {
  if (!is_array()) node_ = Array{};
  std::get<Array>(node_).push_back(std::move(value));
}

std::string Json::format_number(double v) {
  if (!std::isfinite(v)) return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "null");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

void escape_to(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

void Json::dump_to(std::string& out, int indent, int depth) const {
  const std::string pad(indent * (depth + 1), ' ');
  const std::string pad_close(indent * depth, ' ');
  const char* nl = indent > 0 ? "\n" : "";
  if (std::holds_alternative<std::nullptr_t>(node_)) {
    out += "null";
  } else if (const auto* d = std::get_if<double>(&node_)) {
    out += format_number(*d);
  } else if (const auto* b = std::get_if<bool>(&node_)) {
    out += *b ? "true" : "false";
  } else if (const auto* s = std::get_if<std::string>(&node_)) {
    escape_to(out, *s);
  } else if (const auto* arr = std::get_if<Array>(&node_)) {
    if (arr->empty()) {
      out += "[]";
      return;
    }
    out += "[";
    for (size_t i = 0; i < arr->size(); ++i) {
      out += nl;
      if (indent) out += pad;
      (*arr)[i].dump_to(out, indent, depth + 1);
      if (i + 1 < arr->size()) out += ",";
      if (!indent && i + 1 < arr->size()) out += " ";
    }
    out += nl;
    if (indent) out += pad_close;
    out += "]";
  } else {
    const auto& obj = std::get<Object>(node_);
    if (obj.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    for (size_t i = 0; i < obj.size(); ++i) {
      out += nl;
      if (indent) out += pad;
      escape_to(out, obj[i].first);
      out += indent ? ": " : ":";
      obj[i].second.dump_to(out, indent, depth + 1);
      if (i + 1 < obj.size()) out += ",";
      if (!indent && i + 1 < obj.size()) out += " ";
    }
    out += nl;
    if (indent) out += pad_close;
    out += "}";
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  return out;
}

// ------------------------------------------------------------- space specs

SpaceSpec parse_space_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw spec_error(std::string("space spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw spec_error("space spec must be a JSON object");
  if (!doc.contains("type") || !doc["type"].is_string())
    throw spec_error("space spec needs a string field \"type\"");

  SpaceSpec spec;
  spec.type = doc["type"].get<std::string>();

  auto get_number = [&](const char* key, double fallback, bool required = false) {
    if (!doc.contains(key)) {
      if (required) throw spec_error(std::string("field \"") + key + "\" is required");
      return fallback;
    }
    if (!doc[key].is_number())
      throw spec_error(std::string("field \"") + key + "\" must be a number");
    return doc[key].get<double>();
  };

  spec.scale = get_number("scale", 1.0);
  if (!(spec.scale > 0.0)) throw spec_error("field \"scale\" must be positive");

  if (spec.type == "plane") {
  } else if (spec.type == "hyperboloid") {
    spec.a = get_number("a", 1.0, true);
    if (!(spec.a >= 0.0)) throw spec_error("field \"a\" must satisfy a >= 0");
  } else if (spec.type == "spheroid") {
    if (doc.contains("profile")) {
      if (doc["profile"] != "sin")
        throw spec_error("field \"profile\" supports only \"sin\" (the round sphere)");
      spec.c = 1.0;
    }
    spec.c = get_number("c", spec.c);
    if (!(spec.c > 0.0)) throw spec_error("field \"c\" must be positive");
  } else if (spec.type == "paraboloid") {
    spec.b = get_number("b", 1.0);
    if (!(spec.b > 0.0)) throw spec_error("field \"b\" must be positive");
  } else if (spec.type == "flat_cone") {
    spec.length = get_number("length", 0.0, true);
    if (!(spec.length > 0.0) || spec.length > 2.0 * pi + 1e-12)
      throw spec_error("field \"length\" must lie in (0, 2*pi]");
  } else if (spec.type == "profile_table") {
    if (!doc.contains("r") || !doc.contains("m") || !doc["r"].is_array() ||
        !doc["m"].is_array())
      throw spec_error("profile_table needs array fields \"r\" and \"m\"");
    spec.table_r = doc["r"].get<std::vector<double>>();
    spec.table_m = doc["m"].get<std::vector<double>>();
    if (spec.table_r.size() != spec.table_m.size() || spec.table_r.size() < 2)
      throw spec_error("fields \"r\" and \"m\" must have equal length >= 2");
    for (size_t i = 1; i < spec.table_r.size(); ++i)
      if (!(spec.table_r[i] > spec.table_r[i - 1]))
        throw spec_error("field \"r\" must be strictly increasing");
    if (spec.table_r[0] != 0.0 || spec.table_m[0] != 0.0)
      throw spec_error("profile_table must start at r = 0 with m = 0");
  } else if (spec.type == "hyperbolic_ideal_triangle") {
  } else {
    throw spec_error("unknown space type \"" + spec.type + "\"");
  }

  // canonical echo with a stable field order
  Json canon = Json::object();
  canon.set("type", spec.type);
  if (spec.type == "hyperboloid") canon.set("a", spec.a);
  if (spec.type == "spheroid") canon.set("c", spec.c);
  if (spec.type == "paraboloid") canon.set("b", spec.b);
  if (spec.type == "flat_cone") canon.set("length", spec.length);
  if (spec.type == "profile_table") {
    Json r = Json::array(), m = Json::array();
    for (double v : spec.table_r) r.push_back(v);
    for (double v : spec.table_m) m.push_back(v);
    canon.set("r", std::move(r));
    canon.set("m", std::move(m));
  }
  if (spec.scale != 1.0) canon.set("scale", spec.scale);
  spec.canonical = canon.dump();
  return spec;
}

ProfileSurface build_surface(const SpaceSpec& spec) {
  if (spec.type == "plane") return ProfileSurface::plane(spec.scale);
  if (spec.type == "hyperboloid") return ProfileSurface::hyperboloid(spec.a, spec.scale);
  if (spec.type == "spheroid") return ProfileSurface::spheroid(spec.c, spec.scale);
  if (spec.type == "paraboloid") return ProfileSurface::paraboloid(spec.b, spec.scale);
  if (spec.type == "profile_table") {
    try {
      return ProfileSurface::from_table(spec.table_r, spec.table_m);
    } catch (const std::invalid_argument& e) {
      throw spec_error(e.what());
    }
  }
  throw capability_error("space type \"" + spec.type + "\" is not a revolution surface");
}

std::unique_ptr<Space> build_space(const SpaceSpec& spec) {
  if (spec.type == "flat_cone") return make_cone_space(FlatCone(spec.length));
  if (spec.type == "hyperbolic_ideal_triangle") return make_ideal_triangle_space();
  return make_surface_space(build_surface(spec));
}

// ----------------------------------------------------------- run_command

namespace {

const char* convention_text =
    "obtuse values are normalized by subtracting pi/2; angles to a direction set "
    "take the infimum over the set";

Json estimate_json(const InvariantEstimate& est) {
  Json j = Json::object();
  j.set("value", est.value);
  Json ladder = Json::array();
  for (double v : est.ladder) ladder.push_back(v);
  j.set("ladder", std::move(ladder));
  j.set("monotone", est.monotone);
  j.set("uncertainty", est.uncertainty);
  return j;
}

SpacePoint need_point(const std::vector<double>& coords, const char* name) {
  if (coords.size() != 2)
    throw spec_error(std::string("point \"") + name + "\" needs two coordinates");
  return SpacePoint{coords[0], coords[1]};
}

ObtuseConfig make_config(const RunConfig& cfg, const Space& space) {
  ObtuseConfig oc;
  oc.pair_separations = cfg.separations;
  oc.pairs_per_separation = cfg.pairs;
  oc.far_radii = cfg.rfar;
  oc.samples_per_radius = cfg.samples;
  oc.kappa = Curvature(cfg.kappa);
  oc.seed = cfg.seed;
  oc.variant = cfg.variant == "angle" ? ObtuseVariant::angle : ObtuseVariant::comparison;
  (void)space;
  return oc;
}

Json growth_json(const GrowthReport& g) {
  Json j = Json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j.set(key, *v);
  };
  put("v_inf", g.v_inf);
  put("ideal_boundary_length", g.ideal_boundary_length);
  put("total_curvature", g.total_curvature);
  put("total_curvature_quadrature", g.total_curvature_quadrature);
  put("normalized_volume", g.normalized_volume);
  put("diameter", g.diameter);
  put("radius", g.radius);
  return j;
}

}  // namespace

Json run_command(const RunConfig& cfg, const SpaceSpec& spec) {
  Json doc = Json::object();
  doc.set("command", cfg.command);
  doc.set("spec", spec.canonical);
  doc.set("seed", static_cast<double>(cfg.seed));

  const auto t0 = std::chrono::steady_clock::now();
  Json extra = Json::object();
  double value = 0.0;
  Json ladder = Json::array();
  double uncertainty = 0.0;

  auto fill_estimate = [&](const InvariantEstimate& est) {
    value = est.value;
    for (double v : est.ladder) ladder.push_back(v);
    uncertainty = est.uncertainty;
    extra.set("monotone", est.monotone);
  };

  if (cfg.command == "dist") {
    auto space = build_space(spec);
    value = space->distance(need_point(cfg.point_p, "p"), need_point(cfg.point_q, "q"));
  } else if (cfg.command == "geodesic") {
    const ProfileSurface surf = build_surface(spec);
    const SpacePoint p = need_point(cfg.point_p, "p");
    const GeodesicPath path = integrate_geodesic(
        surf, make_state(surf, SurfacePoint{p.u, p.v}, cfg.beta), cfg.length);
    value = path.length;
    extra.set("winding", static_cast<double>(path.winding));
    extra.set("clairaut_drift", path.clairaut_drift);
    extra.set("unit_speed_drift", path.unit_speed_drift);
    Json samples = Json::array();
    const size_t stride = std::max<size_t>(1, path.samples.size() / 64);
    for (size_t i = 0; i < path.samples.size(); i += stride) {
      const PathSample& s = path.samples[i];
      samples.push_back(Json::array({s.s, s.point.r, s.point.theta, s.r_dot, s.theta_dot}));
    }
    const PathSample& last = path.samples.back();
    samples.push_back(Json::array({last.s, last.point.r, last.point.theta, last.r_dot,
                                   last.theta_dot}));
    extra.set("samples", std::move(samples));
  } else if (cfg.command == "angle") {
    auto space = build_space(spec);
    const SpacePoint p = need_point(cfg.point_p, "p");
    const SpacePoint q = need_point(cfg.point_q, "q");
    const SpacePoint x = need_point(cfg.point_x, "x");
    const double dpq = space->distance(p, q);
    const double dpx = space->distance(p, x);
    const double dqx = space->distance(q, x);
    value = comparison_angle_at(Curvature(cfg.kappa), dpq, dpx, dqx);
    extra.set("comparison_angle_at_q", comparison_angle_at(Curvature(cfg.kappa), dpq, dqx, dpx));
    if (space->has_angles()) {
      const MinimalDirections to_q = space->minimal_directions(p, q);
      const MinimalDirections to_x = space->minimal_directions(p, x);
      double g = pi;
      for (double a : to_q.at_p)
        for (double b : to_x.at_p) g = std::min(g, num::direction_gap(a, b));
      extra.set("angle_at_p", g);
    }
  } else if (cfg.command == "obtuse-pair") {
    auto space = build_space(spec);
    ComparisonQuery q;
    q.p = need_point(cfg.point_p, "p");
    q.q = need_point(cfg.point_q, "q");
    q.kappa = Curvature(cfg.kappa);
    q.far_radii = cfg.rfar;
    q.samples_per_radius = cfg.samples;
    q.seed = cfg.seed;
    if (cfg.variant == "both") {
      const InvariantEstimate comp = pair_obtuse_comparison(*space, q);
      const InvariantEstimate ang = pair_obtuse_angle(*space, q);
      fill_estimate(ang);
      extra.set("comparison", estimate_json(comp));
      extra.set("angle", estimate_json(ang));
    } else if (cfg.variant == "angle") {
      fill_estimate(pair_obtuse_angle(*space, q));
    } else {
      fill_estimate(pair_obtuse_comparison(*space, q));
    }
  } else if (cfg.command == "obtuse-inf") {
    auto space = build_space(spec);
    fill_estimate(obtuse_from_infinity(*space, make_config(cfg, *space)));
  } else if (cfg.command == "obtuse-compact") {
    auto space = build_space(spec);
    fill_estimate(obtuse_compact(*space, make_config(cfg, *space)));
  } else if (cfg.command == "kappa-obtuse") {
    auto space = build_space(spec);
    fill_estimate(kappa_obtuse_infinity(*space, Curvature(cfg.kappa), make_config(cfg, *space)));
  } else if (cfg.command == "growth") {
    auto space = build_space(spec);
    const GrowthReport g = growth_report(*space);
    extra = growth_json(g);
    value = g.v_inf ? *g.v_inf : (g.normalized_volume ? *g.normalized_volume : 0.0);
  } else if (cfg.command == "totcurv") {
    const ProfileSurface surf = build_surface(spec);
    const AsymptoticProfile ap = asymptotic_profile(surf);
    value = ap.total_curvature;
    extra.set("total_curvature", ap.total_curvature);
    extra.set("total_curvature_quadrature", ap.total_curvature_quadrature);
    extra.set("m_prime_limit", ap.m_prime_limit);
    extra.set("ideal_boundary_length", ap.ideal_boundary_length);
    extra.set("route_gap", std::fabs(ap.total_curvature - ap.total_curvature_quadrature));
  } else if (cfg.command == "rays") {
    const ProfileSurface surf = build_surface(spec);
    const SpacePoint p = need_point(cfg.point_p, "p");
    const SurfacePoint sp{p.u, p.v};
    Json dirs = Json::array();
    for (const double t : cfg.directions) {
      Json row = Json::object();
      row.set("direction", t);
      row.set("is_ray", is_ray(surf, sp, t, cfg.horizon, cfg.tol));
      dirs.push_back(std::move(row));
    }
    if (!cfg.directions.empty()) extra.set("directions", std::move(dirs));
    const RayMeasureResult rm = ray_measure(surf, sp, cfg.horizon, cfg.tol);
    extra.set("ray_measure_lower", rm.lower);
    extra.set("ray_measure_upper", rm.upper);
    value = rm.lower;
  } else if (cfg.command == "constants") {
    const StrainerConstants sc = strainer_constants(cfg.n_dim, cfg.d_bound, cfg.r_min, cfg.v1);
    value = sc.c1;
    extra.set("c1", sc.c1);
    extra.set("eps", sc.eps);
    Json thetas = Json::array();
    for (const double e : {0.1, 0.3, 0.6, 1.0, 0.5 * pi}) {
      thetas.push_back(Json::array({e, theta_n(cfg.n_dim, e)}));
    }
    extra.set("theta_n", std::move(thetas));
  } else if (cfg.command == "report") {
    Json rows = Json::array();
    int passed = 0;
    const auto results = run_acceptance();
    for (const CriterionResult& cr : results) {
      Json row = Json::object();
      row.set("criterion", static_cast<double>(cr.index));
      row.set("name", cr.name);
      row.set("pass", cr.pass);
      row.set("detail", cr.detail);
      row.set("values", cr.values);
      rows.push_back(std::move(row));
      passed += cr.pass ? 1 : 0;
    }
    extra.set("rows", std::move(rows));
    value = static_cast<double>(passed);
  } else {
    throw spec_error("unknown command \"" + cfg.command + "\"");
  }

  doc.set("value", value);
  doc.set("ladder", std::move(ladder));
  doc.set("uncertainty", uncertainty);
  if (cfg.convention_notes) doc.set("convention_notes", convention_text);
  for (auto& [k, v] : extra.items()) doc.set(k, v);
  if (cfg.timing) {
    const auto t1 = std::chrono::steady_clock::now();
    doc.set("wall_time", std::chrono::duration<double>(t1 - t0).count());
  }
  return doc;
}

// ---------------------------------------------------------------- emission

namespace {

void flatten_csv(const Json& j, const std::string& prefix,
                 std::vector<std::pair<std::string, std::string>>& cols) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten_csv(v, prefix.empty() ? k : prefix + "." + k, cols);
  } else if (j.is_array()) {
    std::string joined;
    for (size_t i = 0; i < j.elements().size(); ++i) {
      if (i) joined += ";";
      const std::string cell = j.elements()[i].dump();
      joined += cell;
    }
    cols.emplace_back(prefix, joined);
  } else {
    cols.emplace_back(prefix, j.dump());
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string emit_report(const Json& doc, const std::string& format) {
  if (format == "json") return doc.dump(2) + "\n";
  if (format != "csv") throw spec_error("output format must be json or csv");

  const bool multi = doc.is_array();
  std::vector<const Json*> rows;
  if (multi) {
    for (const Json& r : doc.elements()) rows.push_back(&r);
  } else {
    rows.push_back(&doc);
  }
  std::vector<std::vector<std::pair<std::string, std::string>>> flat;
  std::vector<std::string> header;
  for (const Json* r : rows) {
    flat.emplace_back();
    flatten_csv(*r, "", flat.back());
    for (const auto& [k, v] : flat.back()) {
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
    }
  }
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += csv_escape(header[i]);
  }
  out += "\n";
  for (const auto& row : flat) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) out += ",";
      for (const auto& [k, v] : row) {
        if (k == header[i]) {
          out += csv_escape(v);
          break;
        }
      }
    }
    out += "\n";
  }
  return out;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const spec_error&) {
    return 2;
  } catch (const capability_error&) {
    return 3;
  } catch (const not_converged&) {
    return 4;
  } catch (const std::domain_error&) {
    return 2;
  } catch (const std::invalid_argument&) {
    return 2;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace obtuselab::cli
