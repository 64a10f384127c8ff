#include <array>
#include <cmath>

#include "wavebranch/solver.hpp"

namespace wavebranch {

SpMat assemble_matrix(const Mesh& m, bool include_closed_ducts) {
  const int nx = m.nx(), ny = m.ny();
  const double k2 = m.k * m.k;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(m.unknowns()) * 9);
  auto add = [&](int p, int q, double v) {
    if (p >= 0 && q >= 0) trip.emplace_back(p, q, cplx(v, 0.0));
  };
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      if (!m.active_cell[static_cast<std::size_t>(i * (ny - 1) + j)]) continue;
      const double hx = m.xs[static_cast<std::size_t>(i + 1)] - m.xs[static_cast<std::size_t>(i)];
      const double hy = m.ys[static_cast<std::size_t>(j + 1)] - m.ys[static_cast<std::size_t>(j)];
      const int c00 = m.at(i, j), c10 = m.at(i + 1, j), c01 = m.at(i, j + 1), c11 = m.at(i + 1, j + 1);
      const double mass = 0.25 * hx * hy;
      for (int c : {c00, c10, c01, c11}) add(c, c, k2 * mass);
      const double wh = hy / (2.0 * hx), wv = hx / (2.0 * hy);
      const std::array<std::array<int, 2>, 4> edges{{{c00, c10}, {c01, c11}, {c00, c01}, {c10, c11}}};
      for (int e = 0; e < 4; ++e) {
        const double w = e < 2 ? wh : wv;
        const int p = edges[static_cast<std::size_t>(e)][0], q = edges[static_cast<std::size_t>(e)][1];
        add(p, p, -w);
        add(q, q, -w);
        add(p, q, w);
        add(q, p, w);
      }
    }
  }
  for (const auto& mc : m.cuts) {
    if (!mc.is_port() && !include_closed_ducts) continue;
    const int n_modes = mc.depth > 0.0 ? mc.size() : mc.radiating;
    const Eigen::MatrixXd wphi = mc.basis.weights.asDiagonal() * mc.basis.phi.leftCols(n_modes);
    Eigen::VectorXcd g(n_modes);
    for (int n = 0; n < n_modes; ++n) g(n) = mc.admittance(n);
    const Eigen::MatrixXcd block = wphi.cast<cplx>() * g.asDiagonal() * wphi.transpose().cast<cplx>();
    for (int a = 0; a < mc.size(); ++a) {
      for (int b = 0; b < mc.size(); ++b) {
        trip.emplace_back(mc.basis.unknowns[static_cast<std::size_t>(a)], mc.basis.unknowns[static_cast<std::size_t>(b)],
                          block(a, b));
      }
    }
  }
  SpMat a(m.unknowns(), m.unknowns());
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

DiscreteSystem assemble(const Domain& d, const Numerics& num) {
  DiscreteSystem sys;
  sys.numerics = num;
  sys.mesh = std::make_shared<const Mesh>(build_mesh(d, num));
  sys.matrix = assemble_matrix(*sys.mesh, true);
  sys.lu = factorize(sys.matrix, num.backend);
  if (num.estimate_condition) sys.condition = condition_estimate(sys.matrix, *sys.lu);
  return sys;
}

cplx incident_trace(const Mesh& mesh, const std::string& port, int mode) {
  const ModalCut& mc = mesh.cut(port);
  if (!mc.is_port()) throw SolverError("'" + port + "' is not a port");
  if (mode < 0 || mode >= mc.radiating) throw SolverError("incident mode index out of range");
  const cplx th = mc.theta[static_cast<std::size_t>(mode)];
  if (th.imag() != 0.0) throw SolverError("incident mode " + std::to_string(mode) + " is not propagating at port " + port);
  const double beta = std::sin(th.real()) / mc.ha;
  return std::exp(cplx(0.0, -th.real() * mc.position / mc.ha)) / std::sqrt(2.0 * beta);
}

VecC incident_rhs(const Mesh& mesh, const std::string& port, int mode) {
  const ModalCut& mc = mesh.cut(port);
  const cplx a = incident_trace(mesh, port, mode);
  const double beta = std::sin(mc.theta[static_cast<std::size_t>(mode)].real()) / mc.ha;
  VecC f = VecC::Zero(mesh.unknowns());
  for (int i = 0; i < mc.size(); ++i) {
    f(mc.basis.unknowns[static_cast<std::size_t>(i)]) +=
        cplx(0.0, 2.0 * beta) * a * mc.basis.weights(i) * mc.basis.phi(i, mode);
  }
  return f;
}

cplx DiscreteSystem::incident_trace(const std::string& port, int mode) const {
  return wavebranch::incident_trace(*mesh, port, mode);
}

VecC DiscreteSystem::rhs(const std::string& port, int mode) const { return incident_rhs(*mesh, port, mode); }

}  // namespace wavebranch
