#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wavebranch/asymptotics.hpp"

using namespace wavebranch;
using std::numbers::pi;

namespace {

const double k08 = 0.8 * pi;
const cplx I(0.0, 1.0);

// Symmetric unitary 2x2 matrix Q diag(e^{ia}, e^{ib}) Qᵀ with Q a rotation by c.
std::array<cplx, 3> symmetric_unitary(double a, double b, double c) {
  const double co = std::cos(c), si = std::sin(c);
  const cplx ea = std::exp(I * a), eb = std::exp(I * b);
  return {co * co * ea + si * si * eb, co * si * (ea - eb), si * si * ea + co * co * eb};
}

AsymptoticModel synthetic(std::mt19937& rng, bool two_mode, double ell = 1.4) {
  std::uniform_real_distribution<double> u(0.0, 2 * pi), v(0.1, 1.4);
  AsymptoticModel m;
  m.k = k08;
  m.ell = ell;
  const auto s = symmetric_unitary(u(rng), u(rng), v(rng));
  m.r_inf = s[0];
  m.t_inf = m.tc_inf = s[1];
  m.rc_inf = s[2];
  m.mixed_scalar = !two_mode;
  if (two_mode) {
    const auto S = symmetric_unitary(u(rng), u(rng), v(rng));
    m.R_inf = S[0];
    m.T_inf = m.Tb_inf = S[1];
    m.Rb_inf = S[2];
    m.alpha = std::sqrt(k08 * k08 - (pi / ell) * (pi / ell));
  } else {
    m.R_inf = std::exp(I * u(rng));
  }
  return m;
}

}  // namespace

TEST_CASE("exact unitary symmetric data map the unit circle to itself") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> Ld(1.0, 20.0);
  for (int i = 0; i < 10; ++i) {
    const AsymptoticModel m = synthetic(rng, false);
    const Circle c = circle_params(m);
    CHECK(std::abs(c.center) < 1e-12);
    CHECK(c.radius == doctest::Approx(1.0).epsilon(1e-12));
    const double L = Ld(rng);
    CHECK(std::abs(std::abs(r_asy(L, m)) - 1.0) < 1e-12);
    // Exact period π/k.
    CHECK(std::abs(r_asy(L + pi / k08, m) - r_asy(L, m)) < 1e-11);
  }
}

TEST_CASE("one-mode loci are half-unit circles") {
  std::mt19937 rng(5);
  for (int i = 0; i < 10; ++i) {
    const AsymptoticModel m = synthetic(rng, false);
    for (double L : {1.3, 2.9, 7.7}) {
      const auto [R, T] = RT_asy(L, m);
      CHECK(std::abs(std::abs(R - m.R_inf / 2.0) - 0.5) < 1e-12);
      CHECK(std::abs(std::abs(T + m.R_inf / 2.0) - 0.5) < 1e-12);
    }
  }
}

TEST_CASE("circle parameters of a contraction") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 10; ++i) {
    AsymptoticModel m;
    m.k = k08;
    m.r_inf = {u(rng), u(rng)};
    m.t_inf = m.tc_inf = {u(rng), u(rng)};
    m.rc_inf = {u(rng), u(rng)};
    const Circle c = circle_params(m);
    for (double L = 1.0; L < 2.3; L += 0.1) CHECK(std::abs(std::abs(r_asy(L, m) - c.center) - c.radius) < 1e-12);
  }
}

TEST_CASE("gauge functions") {
  std::mt19937 rng(23);
  const AsymptoticModel m = synthetic(rng, true);
  for (double L : {2.0, 3.5}) {
    // r_asy = r_∞ + t° a(L) and R_asy = R_∞ + T• A(L).
    CHECK(std::abs(r_asy(L, m) - (m.r_inf + m.tc_inf * gauge_a(L, m))) < 1e-12);
    CHECK(std::abs(R_asy(L, m) - (m.R_inf + m.Tb_inf * gauge_A(L, m))) < 1e-12);
  }
  AsymptoticModel decoupled = m;
  decoupled.t_inf = decoupled.tc_inf = 0.0;
  decoupled.rc_inf = std::exp(I * 0.3);
  CHECK(gauge_a(2.0, decoupled) == 0.0);
  CHECK(r_asy(2.0, decoupled) == decoupled.r_inf);
  AsymptoticModel degenerate = m;
  degenerate.rc_inf = std::exp(I * 0.3);
  CHECK_THROWS_AS(gauge_a(2.0, degenerate), RegimeError);
  const AsymptoticModel scalar = synthetic(rng, false);
  CHECK_THROWS_AS(gauge_A(2.0, scalar), RegimeError);
  CHECK(R_asy(4.0, scalar) == scalar.R_inf);
}

TEST_CASE("rational regime") {
  for (auto [mm, nn] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{5, 3}}) {
    const RationalParams p = rational_params(k08, mm, nn);
    const double alpha = std::sqrt(k08 * k08 - (pi / p.ell) * (pi / p.ell));
    CHECK(k08 / alpha == doctest::Approx(double(mm) / nn).epsilon(1e-12));
    CHECK(p.period == doctest::Approx(mm * pi / k08));
    CHECK(p.period == doctest::Approx(nn * pi / alpha));
  }
  CHECK(rational_params(k08, 2, 1).ell == doctest::Approx(2 * pi / (k08 * std::sqrt(3.0))));
  CHECK_THROWS_AS(rational_params(k08, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(rational_params(k08, 1, 2), std::invalid_argument);
}

TEST_CASE("rational curves close and match the L parametrization") {
  std::mt19937 rng(29);
  for (auto [mm, nn] : {std::pair{2, 1}, std::pair{3, 1}}) {
    const double ell = rational_params(k08, mm, nn).ell;
    const AsymptoticModel m = synthetic(rng, true, ell);
    const CurveSamples s = curve_samples(m, mm, nn, 61);
    REQUIRE(s.phase.size() == 61);
    CHECK(std::abs(s.S_R.front() - s.S_R.back()) < 1e-12);
    CHECK(std::abs(s.S_T.front() - s.S_T.back()) < 1e-12);
    const double period = mm * pi / k08;
    for (std::size_t i = 0; i < s.phase.size(); i += 7) {
      // z = e^{−2iαL/n} = e^{iθ}.
      const double L = -nn * s.phase[i] / (2.0 * m.alpha) + 10.0 * period;
      for (double shift : {0.0, period}) {
        const auto [R, T] = RT_asy(L + shift, m);
        CHECK(std::abs(R - s.S_R[i]) < 1e-10);
        CHECK(std::abs(T - s.S_T[i]) < 1e-10);
      }
    }
  }
  const AsymptoticModel scalar = synthetic(rng, false);
  CHECK_THROWS_AS(curve_samples(scalar, 2, 1, 10), RegimeError);
}

TEST_CASE("at least m - n zeros of R and T per period") {
  std::mt19937 rng(31);
  for (auto [mm, nn] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{4, 1}}) {
    const double ell = rational_params(k08, mm, nn).ell;
    for (int trial = 0; trial < 5; ++trial) {
      const AsymptoticModel m = synthetic(rng, true, ell);
      const double period = mm * pi / k08;
      // R_full = 0 ⇔ r_asy/R_asy = −1 and T_full = 0 ⇔ r_asy/R_asy = 1 (both unimodular).
      int zr = 0, zt = 0;
      const int n = 20000;
      double prev = std::arg(r_asy(2.0, m) / R_asy(2.0, m));
      for (int i = 1; i <= n; ++i) {
        const double L = 2.0 + period * i / n;
        const double cur = std::arg(r_asy(L, m) / R_asy(L, m));
        if ((prev < 0) != (cur < 0)) {
          if (std::abs(prev - cur) < pi) ++zt;
          else ++zr;
        }
        prev = cur;
      }
      CHECK(zr >= mm - nn);
      CHECK(zt >= mm - nn);
    }
  }
}

TEST_CASE("decay rate") {
  CHECK(decay_rate(1.0, k08) == doctest::Approx(0.6 * pi));
  CHECK_THROWS_AS(decay_rate(1.3, k08), RegimeError);
}

TEST_CASE("computed model predicts the solver at long branches") {
  const AsymptoticModel m = compute_model(1.0, k08, {});
  CHECK(m.mixed_scalar);
  CHECK(m.neumann_residual < 1e-10);
  BranchedGuideParams g;
  g.ell = 1.0;
  g.k = k08;
  CHECK(m.kb() > m.k);  // 5-point dispersion advances the discrete phase
  CHECK(m.kb() - m.k < 1e-3);
  double prev = 1.0;
  for (double L : {2.0, 3.0, 4.0}) {
    g.L = L;
    const Coefficients c = half_scattering(g, BoundaryCondition::Neumann, {});
    const double err = std::abs(c.r - r_asy(L, m));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-12);

  const AsymptoticModel m2 = compute_model(1.4, k08, {});
  CHECK(m2.two_mode());
  g.ell = 1.4;
  g.L = 8.0;
  const Coefficients d = half_scattering(g, BoundaryCondition::Dirichlet, {});
  CHECK(std::abs(d.R_mix - R_asy(8.0, m2)) < 1e-9);
  const nlohmann::json j = m2;
  CHECK(j.contains("Rb_inf"));
  CHECK(j.at("alpha_branch").get<double>() == doctest::Approx(m2.alpha).epsilon(1e-3));
}
