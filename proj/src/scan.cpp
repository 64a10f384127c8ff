#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "wavebranch/scattering.hpp"

namespace wavebranch {

ScanSystem::ScanSystem(const Domain& base, const Numerics& num) : num_(num) {
  mesh_ = std::make_shared<const Mesh>(build_mesh(base, num, true));
  const Mesh& m = *mesh_;
  int cols = 0;
  for (std::size_t i = 0; i < m.cuts.size(); ++i) {
    const ModalCut& mc = m.cuts[i];
    if (mc.is_port() || !mc.rect) continue;
    duct_names_.push_back(mc.name);
    duct_rects_.push_back(*mc.rect);
    duct_cut_.push_back(i);
    duct_base_.push_back(mc.position);  // cut sits at the junction row
    col_offset_.push_back(cols);
    cols += mc.size();
  }
  a0_ = assemble_matrix(m, false);
  lu_ = factorize(a0_, num.backend);
  u_ = Eigen::MatrixXcd::Zero(m.unknowns(), cols);
  for (std::size_t d = 0; d < duct_cut_.size(); ++d) {
    const ModalCut& mc = m.cuts[duct_cut_[d]];
    for (int a = 0; a < mc.size(); ++a) {
      for (int n = 0; n < mc.size(); ++n) {
        u_(mc.basis.unknowns[static_cast<std::size_t>(a)], col_offset_[d] + n) = mc.basis.weights(a) * mc.basis.phi(a, n);
      }
    }
  }
  x_ = lu_->solve(u_);
  c_ = u_.transpose() * x_;
  for (const auto& mc : m.cuts) {
    if (!mc.is_port()) continue;
    for (int n = 0; n < mc.radiating; ++n) {
      if (mc.theta[static_cast<std::size_t>(n)].imag() != 0.0) continue;
      incidences_.emplace_back(mc.name, n);
      y_.push_back(lu_->solve(incident_rhs(m, mc.name, n)));
    }
  }
}

FieldSolution ScanSystem::solve(const std::vector<double>& tops, const std::string& port, int mode) const {
  if (tops.size() != duct_cut_.size()) throw SolverError("one top coordinate per closed duct is required");
  std::size_t which = incidences_.size();
  for (std::size_t i = 0; i < incidences_.size(); ++i) {
    if (incidences_[i].first == port && incidences_[i].second == mode) which = i;
  }
  if (which == incidences_.size()) throw SolverError("no propagating incident mode " + std::to_string(mode) + " at port " + port);
  auto mesh = std::make_shared<Mesh>(*mesh_);
  const Eigen::Index cols = u_.cols();
  Eigen::VectorXcd s(cols), c(cols);
  for (std::size_t d = 0; d < duct_cut_.size(); ++d) {
    ModalCut& mc = mesh->cuts[duct_cut_[d]];
    const double depth = (tops[d] - duct_base_[d]) / mc.ha;
    if (depth < -1e-9) throw GeometryError("duct top below its junction");
    mc.depth = std::max(0.0, depth);
    for (int n = 0; n < mc.size(); ++n) {
      cplx sn, cn;
      mc.admittance(n, mc.depth, sn, cn);
      s(col_offset_[d] + n) = sn;
      c(col_offset_[d] + n) = cn;
    }
  }
  const VecC& y = y_[which];
  Eigen::MatrixXcd k = s.asDiagonal() * c_;
  k.diagonal() += c;
  const Eigen::VectorXcd z = k.partialPivLu().solve(s.asDiagonal() * (u_.transpose() * y));
  FieldSolution sol;
  sol.values = y - x_ * z;
  sol.incident_port = port;
  sol.incident_mode = mode;
  // Residual of the updated system, evaluated away from duct resonances.
  if (c.cwiseAbs().minCoeff() > 1e-8) {
    const VecC f = incident_rhs(*mesh, port, mode);
    const Eigen::VectorXcd g = s.cwiseQuotient(c);
    const VecC r = f - a0_ * sol.values - u_ * g.asDiagonal() * (u_.transpose() * sol.values);
    sol.residual = r.norm() / f.norm();
  } else {
    sol.residual = std::numeric_limits<double>::quiet_NaN();
  }
  sol.mesh = mesh;
  extract_all(sol);
  return sol;
}

GuideScanner::GuideScanner(const BranchedGuideParams& g, Problem problem, const Numerics& num)
    : g_(g), problem_(problem) {
  Domain d = build_branched_guide(g);
  if (problem == Problem::HalfNeumann) d = half_domain(d, BoundaryCondition::Neumann);
  if (problem == Problem::HalfDirichlet) d = half_domain(d, BoundaryCondition::Dirichlet);
  scan_ = std::make_unique<ScanSystem>(d, num);
  for (std::size_t r : scan_->duct_rects()) {
    const Rect& rc = d.rects()[r];
    role_.push_back(rc.x0 < 0.0 && rc.x1 >= 0.0 ? 0 : 1);
  }
}

Coefficients GuideScanner::evaluate(double L, double gamma) const {
  if (!(L > 1.0)) throw GeometryError("branch height L must exceed 1");
  std::vector<double> tops;
  for (int role : role_) {
    if (role == 0) {
      tops.push_back(L);
    } else {
      if (!(gamma > 1.0)) throw GeometryError("side branch height gamma must exceed 1");
      tops.push_back(gamma);
    }
  }
  const FieldSolution s = scan_->solve(tops, "left", 0);
  Coefficients c;
  c.problem = problem_;
  c.unknowns = scan_->mesh().unknowns();
  const cplx refl = extract_amplitude(s, "left", 0);
  if (problem_ == Problem::Full) {
    c.R = refl;
    c.T = extract_amplitude(s, "right", 0);
    c.energy_residual = std::abs(std::norm(c.R) + std::norm(c.T) - 1.0);
  } else {
    (problem_ == Problem::HalfNeumann ? c.r : c.R_mix) = refl;
    c.energy_residual = std::abs(std::norm(refl) - 1.0);
  }
  return c;
}

}  // namespace wavebranch
