#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "obtuselab/invariants.hpp"

namespace obtuselab::cli {

struct spec_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordered JSON document with deterministic formatting (12 significant
/// digits for numbers), so identical runs emit byte-identical reports.
class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() : node_(nullptr) {}
  Json(std::nullptr_t) : node_(nullptr) {}
  Json(double v) : node_(v) {}
  Json(int v) : node_(static_cast<double>(v)) {}
  Json(std::uint64_t v) : node_(static_cast<double>(v)) {}
  Json(bool v) : node_(v) {}
  Json(const char* v) : node_(std::string(v)) {}
  Json(std::string v) : node_(std::move(v)) {}
  Json(Array v) : node_(std::move(v)) {}
  Json(Object v) : node_(std::move(v)) {}
  static Json array(Array v = {}) { return Json(std::move(v)); }
  static Json object(Object v = {}) { return Json(std::move(v)); }

  void set(const std::string& key, Json value);
  void push_back(Json value);
  bool is_object() const { return std::holds_alternative<Object>(node_); }
  bool is_array() const { return std::holds_alternative<Array>(node_); }
  const Object& items() const { return std::get<Object>(node_); }
  const Array& elements() const { return std::get<Array>(node_); }

  std::string dump(int indent = 0) const;
  static std::string format_number(double v);

 private:
  std::variant<std::nullptr_t, double, bool, std::string, Array, Object> node_;
  void dump_to(std::string& out, int indent, int depth) const;
};

struct SpaceSpec {
  std::string type;
  double a = 1.0;        // hyperboloid
  double c = 1.0;        // spheroid axis ratio
  double b = 1.0;        // paraboloid
  double length = 0.0;   // flat cone
  double scale = 1.0;
  std::vector<double> table_r, table_m;
  std::string canonical;  // normalised spec echo
};

/// Parse and validate a JSON space spec document.
SpaceSpec parse_space_spec(const std::string& text);

ProfileSurface build_surface(const SpaceSpec& spec);   // surface families only
std::unique_ptr<Space> build_space(const SpaceSpec& spec);

struct RunConfig {
  std::string command;
  std::vector<double> rfar;
  std::vector<double> separations;
  int samples = 720;
  int pairs = 36;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  double kappa = 0.0;
  double horizon = 50.0;
  std::string out_format = "json";
  bool convention_notes = true;
  bool timing = false;
  std::string variant = "comparison";  // comparison | angle | both
  // command arguments
  std::vector<double> point_p, point_q, point_x;  // coordinate pairs
  double beta = 0.0;
  double length = 1.0;
  int n_dim = 2;
  double d_bound = 1.0;
  double r_min = 0.5;
  double v1 = 0.1;
  std::vector<double> directions;
};

/// Dispatch a command; throws spec_error / capability_error /
/// not_converged for the documented nonzero exit classes.
Json run_command(const RunConfig& cfg, const SpaceSpec& spec);

/// Serialise a report document as JSON (default) or CSV with a stable
/// column order.
std::string emit_report(const Json& doc, const std::string& format);

/// Map an in-flight exception to the documented exit code
/// (2 spec, 3 capability, 4 non-convergence).
int exit_code_for_current_exception();

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  Json values = Json::object();
};

/// Quantitative verification table; `only` selects a single criterion
/// (1-based), -1 runs everything.
std::vector<CriterionResult> run_acceptance(int only = -1);

}  // namespace obtuselab::cli
