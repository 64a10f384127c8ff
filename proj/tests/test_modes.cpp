#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wavebranch/modes.hpp"

using namespace wavebranch;
using std::numbers::pi;

namespace {

const double k08 = 0.8 * pi;

// Composite Simpson rule on [0, w].
template <class F>
double simpson(F f, double w, int n = 2000) {
  const double h = w / n;
  double s = f(0.0) + f(w);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("cutoffs") {
  const auto nn = cutoffs(2.0, LateralBc::NN, 3);
  CHECK(nn[0] == 0.0);
  CHECK(nn[1] == doctest::Approx(pi / 2));
  CHECK(nn[2] == doctest::Approx(pi));
  const auto dn = cutoffs(0.5, LateralBc::DN, 2);
  CHECK(dn[0] == doctest::Approx(pi));
  CHECK(dn[1] == doctest::Approx(3 * pi));
}

TEST_CASE("axial wavenumbers") {
  CHECK(axial_wavenumber(0.0, k08).real() == doctest::Approx(k08));
  const cplx ev = axial_wavenumber(pi, k08);
  CHECK(ev.real() == 0.0);
  CHECK(ev.imag() == doctest::Approx(0.6 * pi));
  CHECK_THROWS_AS(axial_wavenumber(k08 + 1e-10, k08), ThresholdError);
}

TEST_CASE("propagating counts by regime") {
  CHECK(propagating_count(1.0, LateralBc::NN, k08) == 1);
  CHECK(propagating_count(0.5, LateralBc::DN, k08) == 0);   // ℓ = 1 mixed half branch
  CHECK(propagating_count(0.7, LateralBc::DN, k08) == 1);   // ℓ = 1.4
  CHECK(propagating_count(1.0, LateralBc::DN, k08) == 1);   // ℓ = 2
  CHECK(propagating_count(1.3, LateralBc::NN, k08) == 2);
}

TEST_CASE("profiles are orthonormal") {
  for (LateralBc bc : {LateralBc::NN, LateralBc::DN}) {
    const double w = 0.7;
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) {
        const DuctMode a = duct_mode(m, bc, w, k08), b = duct_mode(n, bc, w, k08);
        const double ip = simpson([&](double s) { return a.profile(s) * b.profile(s); }, w);
        CHECK(ip == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-9));
      }
    }
  }
  // DN profiles vanish on the Dirichlet side.
  CHECK(std::abs(duct_mode(1, LateralBc::DN, 0.7, k08).profile(0.0)) < 1e-14);
}

TEST_CASE("propagating modes carry the same flux") {
  // Flux Im ∫ ū ∂_t u ds of the flux-normalized outgoing mode equals 1/2 in every duct.
  for (auto [bc, w] : {std::pair{LateralBc::NN, 1.0}, std::pair{LateralBc::NN, 1.3}, std::pair{LateralBc::DN, 0.7}}) {
    for (int n = 0; n < propagating_count(w, bc, k08); ++n) {
      const DuctMode m = duct_mode(n, bc, w, k08);
      REQUIRE(m.propagating());
      const double t = 0.37, d = 1e-6;
      const double flux = simpson(
          [&](double s) {
            const cplx u = m.outgoing(s, t);
            const cplx du = (m.outgoing(s, t + d) - m.outgoing(s, t - d)) / (2 * d);
            return (std::conj(u) * du).imag();
          },
          w);
      CHECK(flux == doctest::Approx(0.5).epsilon(1e-6));
    }
  }
  // The piston mode is e^{ikt}/√(2k) on the unit guide.
  const DuctMode p = duct_mode(0, LateralBc::NN, 1.0, k08);
  CHECK(std::abs(p.outgoing(0.3, 1.1) - std::exp(cplx(0, k08 * 1.1)) / std::sqrt(2 * k08)) < 1e-14);
}
