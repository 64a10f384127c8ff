#pragma once

#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "wavebranch/design.hpp"
#include "wavebranch/geometry.hpp"
#include "wavebranch/solver.hpp"

namespace wavebranch::cli {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// lo:hi[:step]; step 0 selects the command default.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  bool operator==(const Range&) const = default;
};

Range parse_range(const std::string& text);
std::string format_range(const Range& r);

struct RunConfig {
  std::string command;
  std::string target;  // design: zero-reflection | zero-transmission | invisible

  double k = 0.8 * std::numbers::pi;
  double ell = 1.0;
  double L = 3.0;
  std::optional<double> gamma;  // side branches present when set (solve, sweep, field, smatrix)
  double theta = 1.5;
  double side_width = 1.0;
  double xmax = 8.0;
  double y_cut = 9.0;

  std::string half;          // "" | neumann | dirichlet
  std::string bc = "neumann";  // smatrix cut: neumann | mixed

  double h = 1.0 / 64.0;
  int modes = 20;
  double solver_tol = 1e-10;
  std::string backend = "umfpack";
  std::string grid = "fitted";
  bool reduce_leads = true;

  Range L_window{2.0, 10.0, 0.0};
  Range gamma_window{1.0, 10.0, 0.0};
  int m = 0;
  int n = 0;
  int samples = 401;

  int count = 0;
  std::optional<double> tol;
  bool joint_refine = false;
  int threads = 1;

  std::string output;
  std::string field_output;

  bool operator==(const RunConfig&) const = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);
void save_config(const RunConfig& c, const std::string& path);

/// Check every parameter against module preconditions; throws ValidationError.
void validate(const RunConfig& c);

Numerics numerics(const RunConfig& c);
BranchedGuideParams guide_params(const RunConfig& c);
double default_tol(const std::string& target);

}  // namespace wavebranch::cli
