#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "obtuselab/cli.hpp"

namespace {

std::string load_space_arg(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return arg;
  std::ifstream in(arg);
  if (!in) throw obtuselab::cli::spec_error("cannot open space file \"" + arg + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace obtuselab::cli;

  CLI::App app{"obtuselab: comparison-geometry invariants on model surfaces"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string space_arg;
  std::string rfar_arg, separations_arg, p_arg, q_arg, x_arg, dirs_arg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--space", space_arg, "space spec: inline JSON or a file path");
    sub->add_option("--rfar", rfar_arg, "far ladder radii, comma separated");
    sub->add_option("--samples", cfg.samples, "far samples per ladder rung");
    sub->add_option("--seed", cfg.seed, "sampling seed");
    sub->add_option("--tol", cfg.tol, "tolerance for ray certificates");
    sub->add_option("--kappa", cfg.kappa, "model-plane curvature for comparison angles");
    sub->add_option("--horizon", cfg.horizon, "ray certificate horizon");
    sub->add_option("--out", cfg.out_format, "output format: json or csv");
    sub->add_option("--separations", separations_arg, "pair separations, comma separated");
    sub->add_option("--pairs", cfg.pairs, "pairs per separation");
    sub->add_option("--variant", cfg.variant, "estimator variant: comparison, angle or both");
    sub->add_flag("--timing", cfg.timing, "include wall time in the report");
    sub->add_option("--convention-notes", [&cfg](const std::vector<std::string>& vals) {
      cfg.convention_notes = vals.empty() || vals.front() != "off";
      return true;
    }, "annotate reports with the normalisation conventions: on|off");
  };

  std::vector<std::pair<std::string, std::string>> commands = {
      {"dist", "distance between two points"},
      {"geodesic", "trace a unit-speed geodesic"},
      {"angle", "comparison (and true) angles for a witness triple"},
      {"obtuse-pair", "pair obtuse constant from infinity"},
      {"obtuse-inf", "obtuse constant from infinity over shrinking pairs"},
      {"obtuse-compact", "compact obtuse constant"},
      {"kappa-obtuse", "comparison kappa-obtuse constant from infinity"},
      {"growth", "volume growth / normalized volume report"},
      {"totcurv", "total curvature by both routes"},
      {"rays", "ray certificates and the ray-direction measure"},
      {"constants", "explicit comparison constants"},
      {"report", "full quantitative verification table"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    add_common(sub);
    if (name == "dist" || name == "angle" || name == "obtuse-pair" || name == "geodesic" ||
        name == "rays") {
      sub->add_option("--p", p_arg, "first point: u,v");
      sub->add_option("--q", q_arg, "second point: u,v");
    }
    if (name == "angle") sub->add_option("--x", x_arg, "witness point: u,v");
    if (name == "geodesic") {
      sub->add_option("--beta", cfg.beta, "initial direction from the outward meridian");
      sub->add_option("--length", cfg.length, "arclength to integrate");
    }
    if (name == "rays") sub->add_option("--directions", dirs_arg, "direction angles to certify");
    if (name == "constants") {
      sub->add_option("--n", cfg.n_dim, "dimension");
      sub->add_option("--D", cfg.d_bound, "diameter bound");
      sub->add_option("--rmin", cfg.r_min, "radius lower bound in [1/2, 1]");
      sub->add_option("--v1", cfg.v1, "volume constant");
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.rfar = parse_list(rfar_arg);
    cfg.separations = parse_list(separations_arg);
    cfg.point_p = parse_list(p_arg);
    cfg.point_q = parse_list(q_arg);
    cfg.point_x = parse_list(x_arg);
    cfg.directions = parse_list(dirs_arg);

    SpaceSpec spec;
    if (cfg.command == "constants" || cfg.command == "report") {
      if (!space_arg.empty()) spec = parse_space_spec(load_space_arg(space_arg));
      spec.canonical = spec.canonical.empty() ? "{}" : spec.canonical;
    } else {
      if (space_arg.empty()) throw spec_error("--space is required for this command");
      spec = parse_space_spec(load_space_arg(space_arg));
    }

    const Json doc = run_command(cfg, spec);
    std::cout << emit_report(doc, cfg.out_format);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for_current_exception();
  }
}
