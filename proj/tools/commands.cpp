#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "wavebranch/asymptotics.hpp"
#include "wavebranch/design.hpp"
#include "wavebranch/parallel.hpp"
#include "wavebranch/scattering.hpp"

namespace wavebranch::cli {

using std::numbers::pi;

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<const char*> header) : out_(out) {
  out_.precision(17);
  for (const char* h : header) {
    if (!first_) out_ << ',';
    out_ << h;
    first_ = false;
  }
  out_ << '\n';
  first_ = true;
}

CsvWriter& CsvWriter::operator<<(double v) {
  if (!first_) out_ << ',';
  out_ << v;
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

namespace {

void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump() << '\n'; }

void log_warnings(std::ostream& log, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) log << "warning: " << w << '\n';
}

Domain solve_domain(const RunConfig& c) {
  Domain d = build_branched_guide(guide_params(c));
  if (!c.half.empty()) d = half_domain(d, bc_from_string(c.half));
  return d;
}

FieldSolution field_solution(const RunConfig& c) {
  const DiscreteSystem sys = assemble(solve_domain(c), numerics(c));
  return solve_with_incidence(sys, "left", 0);
}

void write_field(const FieldSolution& s, const std::string& path, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    export_field(s, fallback);
    return;
  }
  std::ofstream f(path);
  if (!f) throw cli::ValidationError("cannot write field file " + path);
  export_field(s, f);
}

}  // namespace

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const FieldSolution s = field_solution(c);
  Coefficients co;
  co.condition = s.condition;
  co.unknowns = s.mesh->unknowns();
  co.warnings = s.warnings;
  const cplx refl = extract_amplitude(s, "left", 0);
  if (c.half.empty()) {
    co.problem = Problem::Full;
    co.R = refl;
    co.T = extract_amplitude(s, "right", 0);
    co.energy_residual = std::abs(std::norm(co.R) + std::norm(co.T) - 1.0);
  } else if (c.half == "neumann") {
    co.problem = Problem::HalfNeumann;
    co.r = refl;
    co.energy_residual = std::abs(std::norm(refl) - 1.0);
  } else {
    co.problem = Problem::HalfDirichlet;
    co.R_mix = refl;
    co.energy_residual = std::abs(std::norm(refl) - 1.0);
  }
  nlohmann::json j = co;
  j["ell"] = c.ell;
  j["L"] = c.L;
  j["k"] = c.k;
  j["h"] = c.h;
  if (c.gamma) j["gamma"] = *c.gamma;
  emit(out, j);
  log_warnings(log, co.warnings);
  if (!c.field_output.empty()) write_field(s, c.field_output, out);
  return kOk;
}

int cmd_field(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const FieldSolution s = field_solution(c);
  log_warnings(log, s.warnings);
  write_field(s, c.field_output.empty() ? std::string("-") : c.field_output, out);
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& log) {
  CsvWriter csv(out, {"L", "ReR", "ImR", "ReT", "ImT", "absR", "absT", "energy_residual"});
  const Range& w = c.L_window;
  const double step = w.step > 0.0 ? w.step : pi / (50.0 * c.k);
  std::vector<double> Ls;
  for (int i = 0;; ++i) {
    const double L = w.lo + i * step;
    if (L > w.hi + 1e-12 * std::abs(w.hi)) break;
    Ls.push_back(L);
  }
  if (Ls.empty()) return kOk;
  RunConfig base = c;
  base.L = w.hi;
  const GuideScanner scan(guide_params(base), Problem::Full, numerics(c));
  const double gamma = c.gamma.value_or(0.0);
  const auto rows = parallel_map<Coefficients>(Ls.size(), c.threads,
                                               [&](std::size_t i) { return scan.evaluate(Ls[i], gamma); });
  for (std::size_t i = 0; i < Ls.size(); ++i) {
    const auto& r = rows[i];
    csv << Ls[i] << r.R.real() << r.R.imag() << r.T.real() << r.T.imag() << std::abs(r.R) << std::abs(r.T)
        << r.energy_residual;
    csv.end_row();
  }
  (void)log;
  return kOk;
}

int cmd_smatrix(const RunConfig& c, std::ostream& out, std::ostream& log) {
  LimitParams p;
  p.ell = c.ell;
  p.k = c.k;
  p.cut = c.bc == "neumann" ? BoundaryCondition::Neumann : BoundaryCondition::Dirichlet;
  p.y_cut = c.y_cut;
  p.xmax = c.xmax;
  p.modes = c.modes;
  if (c.gamma) p.extra = {ExtraBranch{c.theta, c.side_width, *c.gamma}};
  const SMatrix s = limit_smatrix(p, numerics(c));
  nlohmann::json j = s;
  j["ell"] = c.ell;
  j["k"] = c.k;
  j["h"] = c.h;
  j["y_cut"] = c.y_cut;
  if (!s.scalar) j["symplectic_residual"] = symplectic_check(s, 0).residual;
  emit(out, j);
  log_warnings(log, s.warnings);
  return kOk;
}

int cmd_asy(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const bool rational = c.m != 0 || c.n != 0;
  const double ell = rational ? rational_params(c.k, c.m, c.n).ell : c.ell;
  const AsymptoticModel model = compute_model(ell, c.k, numerics(c), c.y_cut);
  log << nlohmann::json(model).dump() << '\n';
  if (rational) {
    const CurveSamples s = curve_samples(model, c.m, c.n, c.samples);
    CsvWriter csv(out, {"phase", "ReS_R", "ImS_R", "ReS_T", "ImS_T"});
    for (std::size_t i = 0; i < s.phase.size(); ++i) {
      csv << s.phase[i] << s.S_R[i].real() << s.S_R[i].imag() << s.S_T[i].real() << s.S_T[i].imag();
      csv.end_row();
    }
    return kOk;
  }
  const Range& w = c.L_window;
  const double step = w.step > 0.0 ? w.step : pi / (50.0 * c.k);
  CsvWriter csv(out, {"L", "Re_r_asy", "Im_r_asy", "Re_R_asy", "Im_R_asy", "ReR", "ImR", "ReT", "ImT"});
  for (int i = 0;; ++i) {
    const double L = w.lo + i * step;
    if (L > w.hi + 1e-12 * std::abs(w.hi)) break;
    const cplx r = r_asy(L, model), R = R_asy(L, model);
    const auto [Rf, Tf] = RT_asy(L, model);
    csv << L << r.real() << r.imag() << R.real() << R.imag() << Rf.real() << Rf.imag() << Tf.real() << Tf.imag();
    csv.end_row();
  }
  return kOk;
}

int cmd_design(const RunConfig& c, std::ostream& out, std::ostream& log) {
  DesignOptions opt;
  opt.num = numerics(c);
  opt.xmax = c.xmax;
  opt.modes = c.modes;
  opt.threads = c.threads;
  opt.step = c.L_window.step;
  const double tol = c.tol.value_or(default_tol(c.target));
  const Window Lw{c.L_window.lo, c.L_window.hi};
  if (c.target == "invisible") {
    InvisibilityOptions inv;
    inv.theta = c.theta;
    inv.side_width = c.side_width;
    inv.y_cut = c.y_cut;
    inv.joint_refine = c.joint_refine;
    const DesignResult r = find_invisibility(c.ell, c.k, {c.gamma_window.lo, c.gamma_window.hi}, Lw, tol, inv, opt);
    emit(out, r);
    for (const auto& d : r.diagnostics) log << "diagnostic: " << d << '\n';
    return r.converged ? kOk : kUnconverged;
  }
  const DesignSearch s = c.target == "zero-reflection" ? find_zero_reflection(c.ell, c.k, Lw, c.count, tol, opt)
                                                       : find_zero_transmission(c.ell, c.k, Lw, c.count, tol, opt);
  bool any = false;
  for (const auto& r : s.roots) {
    emit(out, r);
    any = any || r.converged;
  }
  for (const auto& d : s.diagnostics) log << "diagnostic: " << d << '\n';
  return any ? kOk : kUnconverged;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& log) {
  try {
    validate(c);
    if (c.command == "solve") return cmd_solve(c, out, log);
    if (c.command == "field") return cmd_field(c, out, log);
    if (c.command == "sweep") return cmd_sweep(c, out, log);
    if (c.command == "smatrix") return cmd_smatrix(c, out, log);
    if (c.command == "asy") return cmd_asy(c, out, log);
    return cmd_design(c, out, log);
  } catch (const ValidationError& e) {
    log << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const GeometryError& e) {
    log << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const RegimeError& e) {
    log << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ThresholdError& e) {
    log << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const SolverError& e) {
    log << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    log << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace wavebranch::cli
