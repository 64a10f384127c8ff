#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace wavebranch::cli;

namespace {

// Flags are collected separately and applied on top of the optional config file.
class Overlay {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& help, std::function<void(RunConfig&, const T&)> set) {
    auto value = std::make_shared<T>();
    CLI::Option* o = app->add_option(flag, *value, help);
    items_.push_back({o, [value, set](RunConfig& c) { set(c, *value); }});
  }

  void add_flag(CLI::App* app, const std::string& flag, const std::string& help, std::function<void(RunConfig&)> set) {
    CLI::Option* o = app->add_flag(flag, help);
    items_.push_back({o, std::move(set)});
  }

  void apply(RunConfig& c) const {
    for (const auto& [o, set] : items_) {
      if (o->count() > 0) set(c);
    }
  }

 private:
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> items_;
};

// --L and --gamma take a value or a lo:hi[:step] window.
void set_value_or_window(const std::string& text, double& value, Range& window) {
  if (text.find(':') != std::string::npos) {
    window = parse_range(text);
  } else {
    try {
      value = std::stod(text);
    } catch (const std::exception&) {
      throw ValidationError("not a number: '" + text + "'");
    }
  }
}

void add_common(CLI::App* app, Overlay& ov) {
  ov.add<double>(app, "--k", "wavenumber k in (0, pi)", [](RunConfig& c, const double& v) { c.k = v; });
  ov.add<double>(app, "--k-pi", "wavenumber as a multiple of pi", [](RunConfig& c, const double& v) {
    c.k = v * std::numbers::pi;
  });
  ov.add<double>(app, "--l,--ell", "central branch width", [](RunConfig& c, const double& v) { c.ell = v; });
  ov.add<std::string>(app, "--L", "branch height, or window lo:hi[:step]",
                      [](RunConfig& c, const std::string& v) { set_value_or_window(v, c.L, c.L_window); });
  ov.add<std::string>(app, "--gamma", "side branch height, or window lo:hi[:step]", [](RunConfig& c, const std::string& v) {
    double g = 0.0;
    set_value_or_window(v, g, c.gamma_window);
    if (v.find(':') == std::string::npos) c.gamma = g;
  });
  ov.add<double>(app, "--theta", "side branch centre", [](RunConfig& c, const double& v) { c.theta = v; });
  ov.add<double>(app, "--side-width", "side branch width", [](RunConfig& c, const double& v) { c.side_width = v; });
  ov.add<double>(app, "--xmax", "lead truncation abscissa", [](RunConfig& c, const double& v) { c.xmax = v; });
  ov.add<double>(app, "--y-cut", "truncation height of the semi-infinite branch",
                 [](RunConfig& c, const double& v) { c.y_cut = v; });
  ov.add<double>(app, "--h", "mesh step", [](RunConfig& c, const double& v) { c.h = v; });
  ov.add<int>(app, "--modes,-M", "modes per port", [](RunConfig& c, const int& v) { c.modes = v; });
  ov.add<double>(app, "--solver-tol", "iterative refinement tolerance",
                 [](RunConfig& c, const double& v) { c.solver_tol = v; });
  ov.add<std::string>(app, "--backend", "umfpack or sparselu", [](RunConfig& c, const std::string& v) { c.backend = v; });
  ov.add<std::string>(app, "--grid", "fitted or strict", [](RunConfig& c, const std::string& v) { c.grid = v; });
  ov.add_flag(app, "--full-leads", "mesh the leads up to the DtN cuts", [](RunConfig& c) { c.reduce_leads = false; });
  ov.add<int>(app, "--threads,-j", "parallel evaluations", [](RunConfig& c, const int& v) { c.threads = v; });
  ov.add<std::string>(app, "--output,-o", "output file (default stdout)",
                      [](RunConfig& c, const std::string& v) { c.output = v; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering in branched acoustic waveguides"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "print this help and exit");
  std::string config_path, write_config;
  app.add_option("--config", config_path, "JSON run configuration (flags override it)");
  app.add_option("--write-config", write_config, "write the resolved configuration and exit");

  Overlay ov;
  auto* solve = app.add_subcommand("solve", "full or half-guide solve at one L");
  auto* sweep = app.add_subcommand("sweep", "R and T over an L window (CSV)");
  auto* smatrix = app.add_subcommand("smatrix", "limit scattering matrix of the semi-infinite half-guide");
  auto* asy = app.add_subcommand("asy", "asymptotic predictions (CSV)");
  auto* design = app.add_subcommand("design", "parameter searches");
  auto* field = app.add_subcommand("field", "total field table x,y,re,im");
  design->require_subcommand(1);
  auto* zr = design->add_subcommand("zero-reflection", "L with R = 0");
  auto* zt = design->add_subcommand("zero-transmission", "L with T = 0");
  auto* inv = design->add_subcommand("invisible", "(gamma, L) with T = 1");

  for (auto* sc : {solve, sweep, smatrix, asy, field, zr, zt, inv}) add_common(sc, ov);
  for (auto* sc : {solve, field}) {
    ov.add<std::string>(sc, "--half", "neumann or dirichlet half-guide", [](RunConfig& c, const std::string& v) {
      c.half = v;
    });
    ov.add<std::string>(sc, "--field", "field dump path", [](RunConfig& c, const std::string& v) { c.field_output = v; });
  }
  ov.add<std::string>(smatrix, "--bc", "cut condition: neumann or mixed", [](RunConfig& c, const std::string& v) {
    c.bc = v;
  });
  ov.add<int>(asy, "--m", "rational regime numerator", [](RunConfig& c, const int& v) { c.m = v; });
  ov.add<int>(asy, "--n", "rational regime denominator", [](RunConfig& c, const int& v) { c.n = v; });
  ov.add<int>(asy, "--samples", "curve samples", [](RunConfig& c, const int& v) { c.samples = v; });
  for (auto* sc : {zr, zt, inv}) {
    ov.add<double>(sc, "--tol", "objective tolerance", [](RunConfig& c, const double& v) { c.tol = v; });
  }
  for (auto* sc : {zr, zt}) ov.add<int>(sc, "--count", "maximum number of roots", [](RunConfig& c, const int& v) { c.count = v; });
  ov.add_flag(inv, "--joint-refine", "alternate gamma/L refinement on the full guide",
              [](RunConfig& c) { c.joint_refine = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (auto* sc : {solve, sweep, smatrix, asy, field}) {
      if (sc->parsed()) cfg.command = sc->get_name();
    }
    for (auto* sc : {zr, zt, inv}) {
      if (sc->parsed()) {
        cfg.command = "design";
        cfg.target = sc->get_name();
      }
    }
    // Default L window of the invisibility search.
    if (inv->parsed() && config_path.empty()) cfg.L_window = {5.0, 10.0, 0.0};
    ov.apply(cfg);
    if (!write_config.empty()) {
      validate(cfg);
      save_config(cfg, write_config);
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }

  if (cfg.output.empty() || cfg.output == "-") return run(cfg, std::cout, std::cerr);
  std::ofstream out(cfg.output);
  if (!out) {
    std::cerr << "error: cannot write " << cfg.output << '\n';
    return kValidation;
  }
  return run(cfg, out, std::cerr);
}
