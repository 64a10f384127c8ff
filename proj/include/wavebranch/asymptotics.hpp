#pragma once

// Long-branch predictors built from the limit scattering matrices of the
// semi-infinite half-guides.

#include <utility>
#include <vector>

#include "json.hpp"
#include "wavebranch/modes.hpp"
#include "wavebranch/scattering.hpp"

namespace wavebranch {

struct AsymptoticModel {
  double k = 0.0;
  double ell = 0.0;
  double alpha = 0.0;  // axial wavenumber of the first mixed branch mode (two-mode regime)
  // Branch phase wavenumbers used by the predictors. compute_model sets them to
  // the discrete axial wavenumbers of its mesh so that the predictors match the
  // discrete solver; 0 means k and alpha.
  double k_branch = 0.0;
  double alpha_branch = 0.0;
  // Neumann half-guide limit [[r, t], [t°, r°]].
  cplx r_inf{}, t_inf{}, tc_inf{}, rc_inf{};
  // Mixed half-guide limit: scalar R_∞, or [[R, T], [T•, R•]].
  bool mixed_scalar = true;
  cplx R_inf{}, T_inf{}, Tb_inf{}, Rb_inf{};
  double neumann_residual = 0.0;  // unitarity + symmetry residual of the stored matrices
  double mixed_residual = 0.0;

  [[nodiscard]] bool two_mode() const { return !mixed_scalar; }
  [[nodiscard]] double kb() const { return k_branch > 0.0 ? k_branch : k; }
  [[nodiscard]] double ab() const { return alpha_branch > 0.0 ? alpha_branch : alpha; }
};

/// Compute both limit matrices numerically and package them, together with the
/// discrete branch wavenumbers at num.h.
AsymptoticModel compute_model(double ell, double k, const Numerics& num, double y_cut = 9.0);
AsymptoticModel model_from(double ell, double k, const SMatrix& neumann, const SMatrix& mixed);

/// a(L) = −t_∞ / (−e^{−2ikL} + r°_∞).
cplx gauge_a(double L, const AsymptoticModel& m);
/// A(L) = −T_∞ / (−e^{−2iαL} + R•_∞), two-mode regime only.
cplx gauge_A(double L, const AsymptoticModel& m);

/// r_asy(L) = r_∞ − (t°_∞)² / (−e^{−2ikL} + r°_∞).
cplx r_asy(double L, const AsymptoticModel& m);
/// R_asy(L) = R_∞ − (T•_∞)² / (−e^{−2iαL} + R•_∞), or R_∞ in the zero-mode regime.
cplx R_asy(double L, const AsymptoticModel& m);

struct Circle {
  cplx center{};
  double radius = 0.0;
};

/// Image of the unit circle under z ↦ r_∞ − (t°_∞)² / (z + r°_∞).
Circle circle_params(const AsymptoticModel& m);

/// Full-guide predictors ((r_asy + R_asy)/2, (r_asy − R_asy)/2).
std::pair<cplx, cplx> RT_asy(double L, const AsymptoticModel& m);

struct RationalParams {
  double ell = 0.0;
  double period = 0.0;  // mπ/k = nπ/α
};

/// Branch width for which k/α = m/n.
RationalParams rational_params(double k, int m, int n);

struct CurveSamples {
  std::vector<double> phase;  // θ with z = e^{iθ}
  std::vector<cplx> S_R;      // locus of R_asy_full
  std::vector<cplx> S_T;      // locus of T_asy_full
};

/// Closed loci traced by (R_asy_full, T_asy_full) when k/α = m/n, sampled
/// over z = e^{−2iαL/n} on the unit circle (θ uniform in [0, 2π], endpoints included).
CurveSamples curve_samples(const AsymptoticModel& model, int m, int n, int samples);

/// β₀ = √((π/ℓ)² − k²), the decay rate of the first mixed branch mode.
double decay_rate(double ell, double k);

void to_json(nlohmann::json& j, const AsymptoticModel& m);

}  // namespace wavebranch
