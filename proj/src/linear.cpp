#include <cmath>

#include <Eigen/SparseLU>
#include <Eigen/UmfPackSupport>

#include "wavebranch/solver.hpp"

namespace wavebranch {

namespace {

class SparseLuSolver final : public LinearSolver {
 public:
  explicit SparseLuSolver(const SpMat& a) {
    lu_.analyzePattern(a);
    lu_.factorize(a);
    if (lu_.info() != Eigen::Success) throw SolverError("sparse LU factorization failed: " + lu_.lastErrorMessage());
  }
  VecC solve(const VecC& b) const override {
    VecC x = lu_.solve(b);
    return x;
  }

 private:
  // Eigen's solve() is logically const but not declared so on every version.
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

class UmfPackSolver final : public LinearSolver {
 public:
  explicit UmfPackSolver(const SpMat& a) : a_(a) {
    lu_.compute(a_);
    if (lu_.info() != Eigen::Success) throw SolverError("UMFPACK factorization failed (matrix singular to working precision)");
  }
  VecC solve(const VecC& b) const override {
    VecC x = lu_.solve(b);
    if (lu_.info() != Eigen::Success) throw SolverError("UMFPACK solve failed");
    return x;
  }

 private:
  SpMat a_;  // UMFPACK keeps a reference to the matrix
  mutable Eigen::UmfPackLU<SpMat> lu_;
};

}  // namespace

Eigen::MatrixXcd LinearSolver::solve(const Eigen::MatrixXcd& b) const {
  Eigen::MatrixXcd x(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < b.cols(); ++c) x.col(c) = solve(VecC(b.col(c)));
  return x;
}

std::unique_ptr<LinearSolver> factorize(const SpMat& a, LinearBackend backend) {
  if (a.rows() != a.cols()) throw SolverError("matrix must be square");
  if (backend == LinearBackend::SparseLU) return std::make_unique<SparseLuSolver>(a);
  return std::make_unique<UmfPackSolver>(a);
}

double condition_estimate(const SpMat& a, const LinearSolver& lu) {
  const Eigen::Index n = a.rows();
  double anorm = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double s = 0.0;
    for (SpMat::InnerIterator it(a, c); it; ++it) s += std::abs(it.value());
    anorm = std::max(anorm, s);
  }
  // Since A is symmetric, Aᴴ y = b is solved as conj(A⁻¹ conj(b)).
  auto solve_h = [&](const VecC& b) -> VecC { return lu.solve(VecC(b.conjugate())).conjugate(); };
  VecC x = VecC::Constant(n, cplx(1.0 / static_cast<double>(n), 0.0));
  double est = 0.0;
  Eigen::Index last_j = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const VecC y = lu.solve(x);
    const double ny = y.cwiseAbs().sum();
    if (iter > 0 && ny <= est) break;
    est = ny;
    VecC xi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(y(i));
      xi(i) = m > 0.0 ? y(i) / m : cplx(1.0, 0.0);
    }
    const VecC z = solve_h(xi);
    Eigen::Index j = 0;
    z.cwiseAbs().maxCoeff(&j);
    if (j == last_j) break;
    last_j = j;
    x.setZero();
    x(j) = 1.0;
  }
  // Higham's alternating-sign safeguard.
  VecC alt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    alt(i) = sgn * (1.0 + static_cast<double>(i) / static_cast<double>(std::max<Eigen::Index>(1, n - 1)));
  }
  const double alt_est = 2.0 * lu.solve(alt).cwiseAbs().sum() / (3.0 * static_cast<double>(n));
  return anorm * std::max(est, alt_est);
}

}  // namespace wavebranch
