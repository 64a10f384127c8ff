#include "wavebranch/modes.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace wavebranch {

using std::numbers::pi;

std::vector<double> cutoffs(double w, LateralBc bc, int count) {
  if (!(w > 0.0)) throw std::invalid_argument("duct width must be positive");
  if (count < 1) throw std::invalid_argument("mode count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double shift = bc == LateralBc::DN ? 0.5 : 0.0;
  for (int n = 0; n < count; ++n) out[static_cast<std::size_t>(n)] = (n + shift) * pi / w;
  return out;
}

cplx axial_wavenumber(double lambda, double k) {
  if (lambda < 0.0 || !(k > 0.0)) throw std::invalid_argument("require lambda >= 0 and k > 0");
  if (std::abs(k - lambda) < kThresholdGuard) {
    throw ThresholdError("wavenumber k = " + std::to_string(k) + " sits at the threshold of a duct mode");
  }
  if (k > lambda) return {std::sqrt(k * k - lambda * lambda), 0.0};
  return {0.0, std::sqrt(lambda * lambda - k * k)};
}

int propagating_count(double w, LateralBc bc, double k) {
  const double shift = bc == LateralBc::DN ? 0.5 : 0.0;
  int n = 0;
  while ((n + shift) * pi / w < k) ++n;
  return n;
}

DuctMode duct_mode(int n, LateralBc bc, double w, double k) {
  DuctMode m;
  m.index = n;
  m.lateral = bc;
  m.width = w;
  m.cutoff = cutoffs(w, bc, n + 1).back();
  m.beta = axial_wavenumber(m.cutoff, k);
  const double b = std::abs(m.beta);
  m.normalization = (bc == LateralBc::NN && n == 0) ? 1.0 / std::sqrt(2.0 * w * b) : 1.0 / std::sqrt(w * b);
  return m;
}

double DuctMode::profile(double s) const {
  if (lateral == LateralBc::DN) return std::sqrt(2.0 / width) * std::sin(cutoff * s);
  if (index == 0) return 1.0 / std::sqrt(width);
  return std::sqrt(2.0 / width) * std::cos(cutoff * s);
}

cplx DuctMode::outgoing(double s, double t) const {
  return std::exp(cplx(0.0, 1.0) * beta * t) * profile(s) / std::sqrt(2.0 * beta);
}

}  // namespace wavebranch
