#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "internal.hpp"
#include "wavebranch/solver.hpp"

namespace wavebranch::detail {

CutBasis make_cut_basis(const std::vector<double>& coords, const std::vector<bool>& dirichlet,
                        const std::vector<int>& unknowns, LateralBc lateral, double width) {
  const int n_all = static_cast<int>(coords.size());
  std::vector<int> keep;
  for (int i = 0; i < n_all; ++i) {
    if (!dirichlet[static_cast<std::size_t>(i)]) keep.push_back(i);
  }
  const int n = static_cast<int>(keep.size());
  if (n == 0) throw SolverError("modal cut has no free nodes");
  Eigen::VectorXd w_all = Eigen::VectorXd::Zero(n_all);
  Eigen::MatrixXd s_all = Eigen::MatrixXd::Zero(n_all, n_all);
  for (int i = 0; i + 1 < n_all; ++i) {
    const double len = std::abs(coords[static_cast<std::size_t>(i + 1)] - coords[static_cast<std::size_t>(i)]);
    w_all(i) += 0.5 * len;
    w_all(i + 1) += 0.5 * len;
    s_all(i, i) += 1.0 / len;
    s_all(i + 1, i + 1) += 1.0 / len;
    s_all(i, i + 1) -= 1.0 / len;
    s_all(i + 1, i) -= 1.0 / len;
  }
  CutBasis b;
  b.weights.resize(n);
  Eigen::MatrixXd s(n, n);
  for (int a = 0; a < n; ++a) {
    const auto ia = static_cast<std::size_t>(keep[static_cast<std::size_t>(a)]);
    b.unknowns.push_back(unknowns[ia]);
    b.coords.push_back(coords[ia]);
    b.weights(a) = w_all(static_cast<Eigen::Index>(ia));
    for (int c = 0; c < n; ++c) s(a, c) = s_all(static_cast<Eigen::Index>(ia), keep[static_cast<std::size_t>(c)]);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, b.weights.asDiagonal().toDenseMatrix());
  if (es.info() != Eigen::Success) throw SolverError("transverse eigenproblem failed");
  b.mu = es.eigenvalues().cwiseMax(0.0);
  b.phi = es.eigenvectors();
  // Fix signs against the continuous profiles in the signed transverse coordinate.
  for (int m = 0; m < n; ++m) {
    const double shift = lateral == LateralBc::DN ? 0.5 : 0.0;
    const double lam = (m + shift) * std::numbers::pi / width;
    double dot = 0.0;
    for (int a = 0; a < n; ++a) {
      const double t = b.coords[static_cast<std::size_t>(a)];
      const double ref = lateral == LateralBc::DN ? std::sin(lam * t) : std::cos(lam * t);
      dot += b.weights(a) * b.phi(a, m) * ref;
    }
    if (dot < 0.0) b.phi.col(m) *= -1.0;
  }
  return b;
}

std::vector<cplx> axial_phases(const Eigen::VectorXd& mu, double k, double ha) {
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(mu.size()));
  for (Eigen::Index n = 0; n < mu.size(); ++n) {
    const double c = 1.0 - 0.5 * ha * ha * (k * k - mu(n));
    if (c <= -1.0) throw SolverError("grid too coarse for the wavenumber: axial phase beyond the Nyquist limit");
    if (std::abs(c - 1.0) < 1e-14) throw ThresholdError("discrete duct mode sits at its threshold");
    if (c < 1.0) {
      out.emplace_back(std::acos(c), 0.0);
    } else {
      out.emplace_back(0.0, std::acosh(c));
    }
  }
  return out;
}

}  // namespace wavebranch::detail

namespace wavebranch {

void ModalCut::admittance(int n, double depth_cells, cplx& s, cplx& c) const {
  const cplx th = theta[static_cast<std::size_t>(n)];
  const cplx I(0.0, 1.0);
  if (n < radiating) {
    s = I * std::sin(th) / ha;
    c = 1.0;
    return;
  }
  if (th.imag() == 0.0) {
    s = std::sin(th) * std::sin(th * depth_cells) / ha;
    c = std::cos(th * depth_cells);
  } else {
    const double kappa = th.imag();
    s = -std::sinh(kappa) * std::tanh(kappa * depth_cells) / ha;
    c = 1.0;
  }
}

cplx ModalCut::admittance(int n) const {
  cplx s, c;
  admittance(n, depth, s, c);
  return s / c;
}

}  // namespace wavebranch
