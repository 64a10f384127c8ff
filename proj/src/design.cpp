#include "wavebranch/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "wavebranch/parallel.hpp"

namespace wavebranch {

using std::numbers::pi;

namespace {

double sweep_step(double k, const DesignOptions& opt) { return opt.step > 0.0 ? opt.step : pi / (50.0 * k); }

// Closed window sampled with the given step; the last sample lands on hi.
std::vector<double> closed_samples(Window w, double step) {
  std::vector<double> s;
  if (!(w.hi > w.lo)) return s;
  const auto n = static_cast<int>(std::ceil((w.hi - w.lo) / step - 1e-9));
  for (int i = 0; i <= n; ++i) s.push_back(std::min(w.lo + i * step, w.hi));
  return s;
}

// Open window: endpoints excluded.
std::vector<double> open_samples(Window w, double step) {
  auto s = closed_samples(w, step);
  if (s.size() < 3) return {};
  return {s.begin() + 1, s.end() - 1};
}

// A root of the wrapped phase ψ lies between consecutive samples when the sign
// changes without crossing the ±π branch cut.
bool phase_bracket(double a, double b) { return (a <= 0.0) != (b <= 0.0) && std::abs(a - b) < pi; }

double wrap(double x) { return std::remainder(x, 2.0 * pi); }

template <class F>
double phase_root(F psi, double lo, double hi, double psi_lo, double psi_hi, int& evaluations) {
  if (psi_lo == 0.0) return lo;
  if (psi_hi == 0.0) return hi;
  std::uintmax_t it = 100;
  auto [a, b] = boost::math::tools::toms748_solve(psi, lo, hi, psi_lo, psi_hi,
                                                  boost::math::tools::eps_tolerance<double>(44), it);
  evaluations += static_cast<int>(it);
  return 0.5 * (a + b);
}

// A bracket can straddle a fast ±π wrap instead of a zero; a genuine root has a small phase.
constexpr double kPhaseRootCheck = 1e-3;

// Bits of relative precision matching the requested relative tolerance.
int precision_bits(double rel_tol) { return std::clamp(static_cast<int>(std::ceil(1.0 - std::log2(rel_tol))), 8, 52); }

BranchedGuideParams guide(double ell, double k, double L, const DesignOptions& opt) {
  BranchedGuideParams g;
  g.ell = ell;
  g.k = k;
  g.L = L;
  g.xmax = opt.xmax;
  g.modes = opt.modes;
  return g;
}

DesignSearch find_zeros(Target target, double ell, double k, Window w, int count, double tol,
                        const DesignOptions& opt) {
  if (!(w.lo > 1.0) || !(w.hi > w.lo)) throw std::invalid_argument("L window must satisfy 1 < lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  DesignSearch out;
  const BranchedGuideParams g = guide(ell, k, 0.5 * (w.lo + w.hi), opt);
  const GuideScanner neu(g, Problem::HalfNeumann, opt.num);
  const GuideScanner mix(g, Problem::HalfDirichlet, opt.num);
  // R = 0 ⇔ r/R_mix = −1; T = 0 ⇔ r/R_mix = 1.
  const double offset = target == Target::ZeroR ? pi : 0.0;
  auto halves = [&](double L) { return std::pair{neu.evaluate(L, 0.0).r, mix.evaluate(L, 0.0).R_mix}; };
  auto psi = [&](double L) {
    const auto [r, m] = halves(L);
    return wrap(std::arg(r / m) - offset);
  };
  auto objective2 = [&](double L) {
    const auto [r, m] = halves(L);
    return std::norm(0.5 * (target == Target::ZeroR ? r + m : r - m));
  };

  const auto Ls = closed_samples(w, sweep_step(k, opt));
  const auto trace = parallel_map<double>(Ls.size(), opt.threads, [&](std::size_t i) { return psi(Ls[i]); });

  std::vector<double> seeds;
  if (opt.seed) {
    try {
      const AsymptoticModel model = compute_model(ell, k, opt.num);
      std::string diag;
      seeds = seed_from_asymptotics(model, target, w, &diag);
      if (!diag.empty()) out.diagnostics.push_back(diag);
    } catch (const RegimeError& e) {
      out.diagnostics.push_back(std::string("no asymptotic seeds: ") + e.what());
    }
  }

  const double half_period = 0.5 * pi / k;
  for (std::size_t i = 0; i + 1 < Ls.size(); ++i) {
    if (count > 0 && static_cast<int>(out.roots.size()) >= count) break;
    if (!phase_bracket(trace[i], trace[i + 1])) continue;
    DesignResult res;
    res.target = target;
    const boost::uintmax_t max_iter = 200;
    boost::uintmax_t it = max_iter;
    const auto best = boost::math::tools::brent_find_minima(objective2, Ls[i], Ls[i + 1], precision_bits(opt.rel_tol), it);
    if (std::abs(psi(best.first)) > kPhaseRootCheck) continue;
    res.iterations = static_cast<int>(it);
    res.L = best.first;
    BranchedGuideParams gl = g;
    gl.L = res.L;
    const Coefficients c = full_scattering(gl, opt.num);
    res.R = c.R;
    res.T = c.T;
    res.objective = std::abs(target == Target::ZeroR ? c.R : c.T);
    res.converged = res.objective <= tol;
    res.diagnostics = c.warnings;
    for (double s : seeds) {
      if (std::abs(s - res.L) < half_period) res.seeds.push_back(s);
    }
    if (!res.converged) {
      std::ostringstream os;
      os << "refined minimum " << res.objective << " above tolerance " << tol;
      res.diagnostics.push_back(os.str());
    }
    out.roots.push_back(std::move(res));
  }
  if (out.roots.empty()) {
    std::ostringstream os;
    os << "no bracket found in L window [" << w.lo << ", " << w.hi << "]";
    out.diagnostics.push_back(os.str());
  }
  return out;
}

}  // namespace

std::string to_string(Target t) {
  switch (t) {
    case Target::ZeroR: return "zero-reflection";
    case Target::ZeroT: return "zero-transmission";
    case Target::Invisible: return "invisible";
  }
  return "?";
}

DesignSearch find_zero_reflection(double ell, double k, Window L_window, int count, double tol,
                                  const DesignOptions& opt) {
  return find_zeros(Target::ZeroR, ell, k, L_window, count, tol, opt);
}

DesignSearch find_zero_transmission(double ell, double k, Window L_window, int count, double tol,
                                    const DesignOptions& opt) {
  return find_zeros(Target::ZeroT, ell, k, L_window, count, tol, opt);
}

std::vector<double> seed_from_asymptotics(const AsymptoticModel& model, cplx target_r, Window w,
                                          std::string* diagnostic) {
  if (!(std::abs(model.rc_inf) < 1.0)) throw RegimeError("seeding needs |r°| < 1");
  // r_asy = target ⇔ e^{−2ik_bL} = r° − (t°)² / (r_∞ − target).
  const cplx den = model.r_inf - target_r;
  if (std::abs(den) < 1e-14) {
    if (diagnostic) *diagnostic = "seed target coincides with r_inf";
    return {};
  }
  const cplx z = model.rc_inf - model.tc_inf * model.tc_inf / den;
  if (std::abs(std::abs(z) - 1.0) > 1e-3) {
    if (diagnostic) {
      std::ostringstream os;
      os << "seed target off the asymptotic circle: |z| = " << std::abs(z);
      *diagnostic = os.str();
    }
    return {};
  }
  const double period = pi / model.kb();
  const double L0 = -std::arg(z) / (2.0 * model.kb());
  std::vector<double> out;
  const double lo = std::max(w.lo, 1.0);
  for (double L = L0 + std::ceil((lo - L0) / period) * period; L <= w.hi; L += period) {
    if (L > 1.0 && L >= lo) out.push_back(L);
  }
  return out;
}

std::vector<double> seed_from_asymptotics(const AsymptoticModel& model, Target target, Window w,
                                          std::string* diagnostic) {
  if (model.two_mode()) throw RegimeError("closed-form seeds need the zero-mode mixed limit");
  if (target == Target::Invisible) throw std::invalid_argument("invisibility is not seeded from r_asy alone");
  return seed_from_asymptotics(model, target == Target::ZeroR ? -model.R_inf : model.R_inf, w, diagnostic);
}

namespace {

ExtraBranch side_branch(const InvisibilityOptions& inv, double gamma) {
  ExtraBranch e;
  e.offset = inv.theta;
  e.width = inv.side_width;
  e.height = gamma;
  return e;
}

void check_invisibility_inputs(double ell, double k, const InvisibilityOptions& inv) {
  if (!(ell > 0.0) || !(ell < pi / k)) throw std::invalid_argument("invisibility design needs ell in (0, pi/k)");
  if (!(inv.theta > 0.5 * ell + 0.5 * inv.side_width)) {
    throw std::invalid_argument("side branch centre must satisfy theta > ell/2 + side_width/2");
  }
}

}  // namespace

std::vector<StageOneCandidate> invisibility_stage_one(double ell, double k, Window gw, const InvisibilityOptions& inv,
                                                      const DesignOptions& opt, std::vector<std::string>* diagnostics) {
  check_invisibility_inputs(ell, k, inv);
  if (!(gw.lo >= 1.0) || !(gw.hi > gw.lo)) throw std::invalid_argument("gamma window must satisfy 1 <= lo < hi");
  LimitParams p;
  p.ell = ell;
  p.k = k;
  p.cut = BoundaryCondition::Dirichlet;
  p.y_cut = inv.y_cut;
  p.xmax = opt.xmax;
  p.modes = opt.modes;
  p.extra = {side_branch(inv, 0.5 * (gw.lo + gw.hi))};
  const ScanSystem scan(limit_domain(p), opt.num);
  if (scan.ducts().size() != 1) throw SolverError("stage 1 expects exactly one closed side duct");
  auto R_inf = [&](double gamma) { return extract_amplitude(scan.solve({gamma}, "left", 0), "left", 0); };
  // R_∞ = −1 ⇔ arg(−R_∞) = 0.
  auto psi = [&](double gamma) { return std::arg(-R_inf(gamma)); };

  const auto gs = open_samples(gw, sweep_step(k, opt));
  const auto trace = parallel_map<double>(gs.size(), opt.threads, [&](std::size_t i) { return psi(gs[i]); });
  std::vector<StageOneCandidate> out;
  int evaluations = 0;
  for (std::size_t i = 0; i + 1 < gs.size(); ++i) {
    if (!phase_bracket(trace[i], trace[i + 1])) continue;
    StageOneCandidate c;
    c.gamma = phase_root(psi, gs[i], gs[i + 1], trace[i], trace[i + 1], evaluations);
    if (std::abs(psi(c.gamma)) > kPhaseRootCheck) continue;
    c.R_inf = R_inf(c.gamma);
    const double d = 1e-5;
    c.slope = std::abs(wrap(psi(c.gamma + d) - psi(c.gamma - d))) / (2.0 * d);
    out.push_back(c);
  }
  if (out.empty() && diagnostics) {
    std::ostringstream os;
    os << "arg R_inf(gamma) never crosses pi in (" << gw.lo << ", " << gw.hi << "); sampled trace:";
    const std::size_t stride = std::max<std::size_t>(1, gs.size() / 20);
    for (std::size_t i = 0; i < gs.size(); i += stride) os << " (" << gs[i] << ", " << wrap(trace[i] + pi) << ")";
    diagnostics->push_back(os.str());
  }
  return out;
}

std::vector<StageTwoCandidate> invisibility_stage_two(double ell, double k, double gamma, cplx R_inf, Window Lw,
                                                      const InvisibilityOptions& inv, const DesignOptions& opt) {
  check_invisibility_inputs(ell, k, inv);
  if (!(Lw.lo >= 1.0) || !(Lw.hi > Lw.lo)) throw std::invalid_argument("L window must satisfy 1 <= lo < hi");
  BranchedGuideParams g = guide(ell, k, 0.5 * (Lw.lo + Lw.hi), opt);
  g.extra = {side_branch(inv, gamma)};
  const GuideScanner neu(g, Problem::HalfNeumann, opt.num);
  const GuideScanner mix(g, Problem::HalfDirichlet, opt.num);
  auto psi = [&](double L) { return std::arg(neu.evaluate(L, gamma).r); };  // r = 1 ⇔ arg r = 0

  const auto Ls = open_samples(Lw, sweep_step(k, opt));
  const auto trace = parallel_map<double>(Ls.size(), opt.threads, [&](std::size_t i) { return psi(Ls[i]); });
  std::vector<StageTwoCandidate> out;
  int evaluations = 0;
  for (std::size_t i = 0; i + 1 < Ls.size(); ++i) {
    if (!phase_bracket(trace[i], trace[i + 1])) continue;
    StageTwoCandidate c;
    c.L = phase_root(psi, Ls[i], Ls[i + 1], trace[i], trace[i + 1], evaluations);
    if (std::abs(psi(c.L)) > kPhaseRootCheck) continue;
    c.r = neu.evaluate(c.L, gamma).r;
    c.R_mix = mix.evaluate(c.L, gamma).R_mix;
    c.tail = std::abs(c.R_mix - R_inf);
    out.push_back(c);
  }
  return out;
}

DesignResult find_invisibility(double ell, double k, Window gw, Window Lw, double tol, const InvisibilityOptions& inv,
                               const DesignOptions& opt) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  DesignResult res;
  res.target = Target::Invisible;
  const auto stage1 = invisibility_stage_one(ell, k, gw, inv, opt, &res.diagnostics);
  if (stage1.empty()) return res;
  // Smallest γ in the periodic single-mode regime of the side branch: its phase
  // slope matches the long-stub slope, taken from the largest candidate.
  const double ref = stage1.back().slope;
  const auto s1 = *std::find_if(stage1.begin(), stage1.end(),
                                [&](const auto& c) { return std::abs(c.slope - ref) <= inv.slope_tol * ref; });
  res.gamma = s1.gamma;
  res.R_inf = s1.R_inf;

  const auto stage2 = invisibility_stage_two(ell, k, s1.gamma, s1.R_inf, Lw, inv, opt);
  if (stage2.empty()) {
    std::ostringstream os;
    os << "arg r(L) never crosses 0 in (" << Lw.lo << ", " << Lw.hi << ") at gamma = " << s1.gamma;
    res.diagnostics.push_back(os.str());
    return res;
  }
  // Shortest branch whose mixed coefficient has settled on R_∞.
  auto pick = std::find_if(stage2.begin(), stage2.end(), [&](const auto& c) { return c.tail <= inv.limit_tol; });
  if (pick == stage2.end()) {
    pick = std::min_element(stage2.begin(), stage2.end(), [](const auto& a, const auto& b) { return a.tail < b.tail; });
    std::ostringstream os;
    os << "no stage-2 root with |R_mix - R_inf| <= " << inv.limit_tol << "; using the smallest tail " << pick->tail;
    res.diagnostics.push_back(os.str());
  }
  res.L = pick->L;
  res.seeds = {s1.gamma, pick->L};

  BranchedGuideParams g = guide(ell, k, res.L, opt);
  g.extra = {side_branch(inv, s1.gamma)};
  auto fresh = [&](double L, double gamma) {
    BranchedGuideParams gg = g;
    gg.L = L;
    gg.extra = {side_branch(inv, gamma)};
    return full_scattering(gg, opt.num);
  };
  Coefficients c = fresh(res.L, s1.gamma);

  if (inv.joint_refine) {
    const GuideScanner full(g, Problem::Full, opt.num);
    auto obj = [&](double L, double gamma) { return std::norm(full.evaluate(L, gamma).T - 1.0); };
    double L = res.L, gamma = s1.gamma, width = 1e-3;
    const int bits = precision_bits(opt.rel_tol);
    for (int sweep = 0; sweep < 4; ++sweep, width *= 0.1) {
      boost::uintmax_t it = 100;
      gamma = boost::math::tools::brent_find_minima([&](double x) { return obj(L, x); }, gamma - width, gamma + width,
                                                    bits, it).first;
      res.iterations += static_cast<int>(it);
      it = 100;
      L = boost::math::tools::brent_find_minima([&](double x) { return obj(x, gamma); }, L - width, L + width, bits, it)
              .first;
      res.iterations += static_cast<int>(it);
    }
    const Coefficients cj = fresh(L, gamma);
    res.joint_improved = std::abs(cj.T - 1.0) < std::abs(c.T - 1.0);
    if (*res.joint_improved) {
      c = cj;
      res.L = L;
      res.gamma = gamma;
    }
  }

  res.R = c.R;
  res.T = c.T;
  res.objective = std::abs(c.T - 1.0);
  res.converged = res.objective <= tol;
  for (const auto& w : c.warnings) res.diagnostics.push_back(w);
  BranchedGuideParams gh = g;
  gh.L = res.L;
  gh.extra = {side_branch(inv, *res.gamma)};
  res.r = half_scattering(gh, BoundaryCondition::Neumann, opt.num).r;
  res.R_mix = half_scattering(gh, BoundaryCondition::Dirichlet, opt.num).R_mix;
  if (!res.converged) {
    std::ostringstream os;
    os << "|T - 1| = " << res.objective << " above tolerance " << tol;
    res.diagnostics.push_back(os.str());
  }
  return res;
}

void to_json(nlohmann::json& j, const DesignResult& r) {
  j = nlohmann::json{{"target", to_string(r.target)},
                     {"converged", r.converged},
                     {"L", r.L},
                     {"R", complex_json(r.R)},
                     {"T", complex_json(r.T)},
                     {"objective", r.objective},
                     {"iterations", r.iterations},
                     {"seeds", r.seeds},
                     {"diagnostics", r.diagnostics}};
  if (r.gamma) j["gamma"] = *r.gamma;
  if (r.r) j["r"] = complex_json(*r.r);
  if (r.R_mix) j["R_mix"] = complex_json(*r.R_mix);
  if (r.R_inf) j["R_inf"] = complex_json(*r.R_inf);
  if (r.joint_improved) j["joint_improved"] = *r.joint_improved;
}

}  // namespace wavebranch
