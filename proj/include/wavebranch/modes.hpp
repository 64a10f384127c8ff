#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "wavebranch/geometry.hpp"

namespace wavebranch {

using cplx = std::complex<double>;

class ThresholdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when parameters fall outside the mode-count regime an operation needs.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance |k - λ| below which a mode is considered to sit at its threshold.
inline constexpr double kThresholdGuard = 1e-8;

/// Cutoffs λ_n: nπ/w for NN, (n + 1/2)π/w for DN.
std::vector<double> cutoffs(double w, LateralBc bc, int count);

/// β = √(k² − λ²), principal branch with Im β > 0 for evanescent modes.
cplx axial_wavenumber(double lambda, double k);

/// Number of modes with λ_n < k.
int propagating_count(double w, LateralBc bc, double k);

/// One transverse mode of a duct of width w. The transverse coordinate s is
/// measured from the first endpoint of the cut (the Dirichlet side for DN).
struct DuctMode {
  int index = 0;
  LateralBc lateral = LateralBc::NN;
  double width = 1.0;
  double cutoff = 0.0;
  cplx beta;
  /// Flux normalization: a propagating mode φ(s) e^{±iβt} · normalization
  /// carries the same energy flux on every port.
  double normalization = 0.0;

  [[nodiscard]] bool propagating() const { return beta.imag() == 0.0; }
  /// L²-orthonormal transverse profile.
  [[nodiscard]] double profile(double s) const;
  /// Flux-normalized mode e^{iβt} profile(s) / √(2β) for propagating modes.
  [[nodiscard]] cplx outgoing(double s, double t) const;
};

DuctMode duct_mode(int n, LateralBc bc, double w, double k);

}  // namespace wavebranch
