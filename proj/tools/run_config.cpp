#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace wavebranch::cli {

namespace {

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool one_of(const std::string& s, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (s == o) return true;
  }
  return false;
}

}  // namespace

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  require(parts.size() == 2 || parts.size() == 3, "range must be lo:hi or lo:hi:step, got '" + text + "'");
  Range r{to_double(parts[0]), to_double(parts[1]), parts.size() == 3 ? to_double(parts[2]) : 0.0};
  require(r.step >= 0.0, "range step must be non-negative");
  return r;
}

std::string format_range(const Range& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.lo << ':' << r.hi;
  if (r.step > 0.0) os << ':' << r.step;
  return os.str();
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"command", c.command},
                     {"target", c.target},
                     {"k", c.k},
                     {"ell", c.ell},
                     {"L", c.L},
                     {"gamma", c.gamma ? nlohmann::json(*c.gamma) : nlohmann::json(nullptr)},
                     {"theta", c.theta},
                     {"side_width", c.side_width},
                     {"xmax", c.xmax},
                     {"y_cut", c.y_cut},
                     {"half", c.half},
                     {"bc", c.bc},
                     {"h", c.h},
                     {"modes", c.modes},
                     {"solver_tol", c.solver_tol},
                     {"backend", c.backend},
                     {"grid", c.grid},
                     {"reduce_leads", c.reduce_leads},
                     {"L_window", {c.L_window.lo, c.L_window.hi, c.L_window.step}},
                     {"gamma_window", {c.gamma_window.lo, c.gamma_window.hi, c.gamma_window.step}},
                     {"m", c.m},
                     {"n", c.n},
                     {"samples", c.samples},
                     {"count", c.count},
                     {"tol", c.tol ? nlohmann::json(*c.tol) : nlohmann::json(nullptr)},
                     {"joint_refine", c.joint_refine},
                     {"threads", c.threads},
                     {"output", c.output},
                     {"field_output", c.field_output}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  const RunConfig d;
  auto range = [&](const char* key, const Range& def) {
    if (!j.contains(key)) return def;
    const auto& a = j.at(key);
    if (a.is_string()) return parse_range(a.get<std::string>());
    require(a.is_array() && (a.size() == 2 || a.size() == 3), std::string(key) + " must be [lo, hi] or [lo, hi, step]");
    return Range{a[0].get<double>(), a[1].get<double>(), a.size() == 3 ? a[2].get<double>() : 0.0};
  };
  auto optional = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
  };
  try {
    c.command = j.value("command", d.command);
    c.target = j.value("target", d.target);
    c.k = j.value("k", d.k);
    if (j.contains("k_pi")) c.k = j.at("k_pi").get<double>() * std::numbers::pi;
    c.ell = j.value("ell", d.ell);
    c.L = j.value("L", d.L);
    c.gamma = optional("gamma");
    c.theta = j.value("theta", d.theta);
    c.side_width = j.value("side_width", d.side_width);
    c.xmax = j.value("xmax", d.xmax);
    c.y_cut = j.value("y_cut", d.y_cut);
    c.half = j.value("half", d.half);
    c.bc = j.value("bc", d.bc);
    c.h = j.value("h", d.h);
    c.modes = j.value("modes", d.modes);
    c.solver_tol = j.value("solver_tol", d.solver_tol);
    c.backend = j.value("backend", d.backend);
    c.grid = j.value("grid", d.grid);
    c.reduce_leads = j.value("reduce_leads", d.reduce_leads);
    c.L_window = range("L_window", d.L_window);
    c.gamma_window = range("gamma_window", d.gamma_window);
    c.m = j.value("m", d.m);
    c.n = j.value("n", d.n);
    c.samples = j.value("samples", d.samples);
    c.count = j.value("count", d.count);
    c.tol = optional("tol");
    c.joint_refine = j.value("joint_refine", d.joint_refine);
    c.threads = j.value("threads", d.threads);
    c.output = j.value("output", d.output);
    c.field_output = j.value("field_output", d.field_output);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
  }
  return j.get<RunConfig>();
}

void save_config(const RunConfig& c, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write config file " + path);
  out << nlohmann::json(c).dump(2) << '\n';
}

double default_tol(const std::string& target) { return target == "zero-reflection" ? 1e-3 : 1e-2; }

void validate(const RunConfig& c) {
  require(one_of(c.command, {"solve", "sweep", "smatrix", "asy", "design", "field"}),
          "unknown command '" + c.command + "'");
  require(std::isfinite(c.k) && c.k > 0.0 && c.k < std::numbers::pi, "k must lie in (0, pi)");
  require(std::isfinite(c.ell) && c.ell > 0.0, "ell must be positive");
  require(std::isfinite(c.xmax) && c.xmax > 0.0, "xmax must be positive");
  require(std::isfinite(c.h) && c.h > 0.0 && c.h <= 0.25, "h must lie in (0, 1/4]");
  require(c.modes >= 1, "modes must be at least 1");
  require(c.solver_tol > 0.0, "solver tolerance must be positive");
  require(one_of(c.backend, {"umfpack", "sparselu"}), "backend must be umfpack or sparselu");
  require(one_of(c.grid, {"fitted", "strict"}), "grid must be fitted or strict");
  require(c.threads >= 1, "threads must be at least 1");
  require(one_of(c.half, {"", "neumann", "dirichlet"}), "half must be neumann or dirichlet");
  if (c.gamma) {
    require(*c.gamma > 1.0, "gamma must exceed 1");
    require(c.side_width > 0.0, "side branch width must be positive");
    require(c.theta > 0.5 * c.ell + 0.5 * c.side_width, "theta must exceed ell/2 + side_width/2");
  }
  const bool needs_L = c.command == "solve" || c.command == "field";
  if (needs_L) require(std::isfinite(c.L) && c.L > 1.0, "L must exceed 1");
  if (c.command == "sweep") {
    require(c.half.empty(), "sweep runs the full problem; --half is not accepted");
    require(c.L_window.lo > 1.0 || c.L_window.hi <= c.L_window.lo, "sweep window must lie in L > 1");
  }
  if (c.command == "smatrix") {
    require(one_of(c.bc, {"neumann", "mixed", "dirichlet"}), "bc must be neumann or mixed");
    require(c.y_cut > 1.0, "y_cut must exceed 1");
  }
  if (c.command == "asy") {
    const bool rational = c.m != 0 || c.n != 0;
    if (rational) {
      require(c.n >= 1 && c.m > c.n, "rational regime needs integers m > n >= 1");
      require(c.samples >= 2, "samples must be at least 2");
    } else {
      require(c.L_window.lo > 1.0 && c.L_window.hi > c.L_window.lo, "asy window must satisfy 1 < lo < hi");
    }
  }
  if (c.command == "design") {
    require(one_of(c.target, {"zero-reflection", "zero-transmission", "invisible"}),
            "design target must be zero-reflection, zero-transmission or invisible");
    require(c.L_window.lo >= 1.0 && c.L_window.hi > c.L_window.lo, "L window must satisfy 1 <= lo < hi");
    if (c.target != "invisible") require(c.L_window.lo > 1.0, "L window must lie in L > 1");
    if (c.tol) require(*c.tol > 0.0, "tolerance must be positive");
    if (c.target == "invisible") {
      require(c.ell < std::numbers::pi / c.k, "invisibility needs ell < pi/k");
      require(c.gamma_window.lo >= 1.0 && c.gamma_window.hi > c.gamma_window.lo,
              "gamma window must satisfy 1 <= lo < hi");
      require(c.theta > 0.5 * c.ell + 0.5 * c.side_width, "theta must exceed ell/2 + side_width/2");
    }
  }
}

Numerics numerics(const RunConfig& c) {
  Numerics num;
  num.h = c.h;
  num.refine_tol = c.solver_tol;
  num.backend = backend_from_string(c.backend);
  num.grid = grid_from_string(c.grid);
  num.reduce_leads = c.reduce_leads;
  return num;
}

BranchedGuideParams guide_params(const RunConfig& c) {
  BranchedGuideParams g;
  g.ell = c.ell;
  g.L = c.L;
  g.k = c.k;
  g.xmax = c.xmax;
  g.modes = c.modes;
  if (c.gamma) g.extra = {ExtraBranch{c.theta, c.side_width, *c.gamma}};
  return g;
}

}  // namespace wavebranch::cli
