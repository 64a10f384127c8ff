#include "wavebranch/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "wavebranch/solver.hpp"

namespace wavebranch {

using std::numbers::pi;

namespace {

const cplx I(0.0, 1.0);

void require_coupled(cplx t, cplx rc) {
  if (std::abs(std::abs(rc) - 1.0) < 1e-8) {
    throw RegimeError("decoupled branch: |r°| = 1, the gauge function is undefined; use a(L) = 0 (t = 0 case)");
  }
  (void)t;
}

// Discrete axial wavenumber of the first mode at the top port of the limit domain.
double branch_wavenumber(LimitParams p, const Numerics& num, BoundaryCondition cut) {
  p.cut = cut;
  const Mesh mesh = build_mesh(limit_domain(p), num);
  const ModalCut& top = mesh.cut("top");
  return top.theta.at(0).real() / top.ha;
}

}  // namespace

AsymptoticModel model_from(double ell, double k, const SMatrix& neumann, const SMatrix& mixed) {
  if (neumann.scalar) throw RegimeError("the Neumann half-guide limit must be a 2x2 matrix");
  AsymptoticModel m;
  m.k = k;
  m.ell = ell;
  m.r_inf = neumann.s00;
  m.t_inf = neumann.s01;
  m.tc_inf = neumann.s10;
  m.rc_inf = neumann.s11;
  m.neumann_residual = neumann.unitarity_residual + neumann.symmetry_residual;
  m.mixed_scalar = mixed.scalar;
  m.R_inf = mixed.s00;
  m.mixed_residual = mixed.unitarity_residual + mixed.symmetry_residual;
  if (!mixed.scalar) {
    m.T_inf = mixed.s01;
    m.Tb_inf = mixed.s10;
    m.Rb_inf = mixed.s11;
    m.alpha = std::sqrt(k * k - (pi / ell) * (pi / ell));
  }
  return m;
}

AsymptoticModel compute_model(double ell, double k, const Numerics& num, double y_cut) {
  LimitParams p;
  p.ell = ell;
  p.k = k;
  p.y_cut = y_cut;
  p.cut = BoundaryCondition::Neumann;
  const SMatrix sn = limit_smatrix(p, num);
  p.cut = BoundaryCondition::Dirichlet;
  const SMatrix sd = limit_smatrix(p, num);
  AsymptoticModel m = model_from(ell, k, sn, sd);
  m.k_branch = branch_wavenumber(p, num, BoundaryCondition::Neumann);
  if (m.two_mode()) m.alpha_branch = branch_wavenumber(p, num, BoundaryCondition::Dirichlet);
  return m;
}

cplx gauge_a(double L, const AsymptoticModel& m) {
  if (m.t_inf == 0.0) return 0.0;
  require_coupled(m.t_inf, m.rc_inf);
  return -m.t_inf / (-std::exp(-2.0 * I * m.kb() * L) + m.rc_inf);
}

cplx gauge_A(double L, const AsymptoticModel& m) {
  if (!m.two_mode()) throw RegimeError("gauge function A(L) needs a propagating mode in the mixed branch");
  if (m.T_inf == 0.0) return 0.0;
  require_coupled(m.T_inf, m.Rb_inf);
  return -m.T_inf / (-std::exp(-2.0 * I * m.ab() * L) + m.Rb_inf);
}

cplx r_asy(double L, const AsymptoticModel& m) {
  if (m.tc_inf == 0.0) return m.r_inf;
  require_coupled(m.tc_inf, m.rc_inf);
  return m.r_inf - m.tc_inf * m.tc_inf / (-std::exp(-2.0 * I * m.kb() * L) + m.rc_inf);
}

cplx R_asy(double L, const AsymptoticModel& m) {
  if (!m.two_mode() || m.Tb_inf == 0.0) return m.R_inf;
  require_coupled(m.Tb_inf, m.Rb_inf);
  return m.R_inf - m.Tb_inf * m.Tb_inf / (-std::exp(-2.0 * I * m.ab() * L) + m.Rb_inf);
}

Circle circle_params(const AsymptoticModel& m) {
  const double d = 1.0 - std::norm(m.rc_inf);
  if (!(d > 0.0)) throw RegimeError("circle parameters need |r°| < 1");
  return {m.r_inf + m.tc_inf * m.tc_inf * std::conj(m.rc_inf) / d, std::norm(m.tc_inf) / d};
}

std::pair<cplx, cplx> RT_asy(double L, const AsymptoticModel& m) {
  const cplx r = r_asy(L, m), R = R_asy(L, m);
  return {0.5 * (r + R), 0.5 * (r - R)};
}

RationalParams rational_params(double k, int m, int n) {
  if (n < 1 || m <= n) throw std::invalid_argument("rational regime needs integers m > n >= 1");
  if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
  const double mm = m, nn = n;
  return {pi / k * mm / std::sqrt(mm * mm - nn * nn), mm * pi / k};
}

CurveSamples curve_samples(const AsymptoticModel& model, int m, int n, int samples) {
  if (n < 1 || m <= n) throw std::invalid_argument("rational regime needs integers m > n >= 1");
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  if (!model.two_mode()) throw RegimeError("curve sampling needs the two-mode mixed limit");
  CurveSamples out;
  for (int s = 0; s < samples; ++s) {
    const double th = 2.0 * pi * s / (samples - 1);
    const cplx z = std::exp(I * th);
    const cplx r = model.r_inf - model.tc_inf * model.tc_inf / (-std::pow(z, m) + model.rc_inf);
    const cplx R = model.R_inf - model.Tb_inf * model.Tb_inf / (-std::pow(z, n) + model.Rb_inf);
    out.phase.push_back(th);
    out.S_R.push_back(0.5 * (r + R));
    out.S_T.push_back(0.5 * (r - R));
  }
  return out;
}

double decay_rate(double ell, double k) {
  if (!(ell > 0.0) || !(k > 0.0)) throw std::invalid_argument("ell and k must be positive");
  if (ell >= pi / k) throw RegimeError("decay rate needs ell < pi/k (no propagating mixed branch mode)");
  return std::sqrt((pi / ell) * (pi / ell) - k * k);
}

void to_json(nlohmann::json& j, const AsymptoticModel& m) {
  j = nlohmann::json{{"k", m.k},
                     {"ell", m.ell},
                     {"r_inf", complex_json(m.r_inf)},
                     {"t_inf", complex_json(m.t_inf)},
                     {"tc_inf", complex_json(m.tc_inf)},
                     {"rc_inf", complex_json(m.rc_inf)},
                     {"k_branch", m.kb()},
                     {"R_inf", complex_json(m.R_inf)},
                     {"mixed_scalar", m.mixed_scalar},
                     {"neumann_residual", m.neumann_residual},
                     {"mixed_residual", m.mixed_residual}};
  if (m.two_mode()) {
    j["alpha"] = m.alpha;
    j["alpha_branch"] = m.ab();
    j["T_inf"] = complex_json(m.T_inf);
    j["Tb_inf"] = complex_json(m.Tb_inf);
    j["Rb_inf"] = complex_json(m.Rb_inf);
  }
}

}  // namespace wavebranch
