#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <tuple>

#include "wavebranch/solver.hpp"

namespace wavebranch {

namespace {

Eigen::VectorXcd trace_coefficients(const ModalCut& mc, const VecC& u) {
  Eigen::VectorXcd tr(mc.size());
  for (int i = 0; i < mc.size(); ++i) tr(i) = u(mc.basis.unknowns[static_cast<std::size_t>(i)]) * mc.basis.weights(i);
  return mc.basis.phi.transpose().cast<cplx>() * tr;
}

// Trace amplitude of the unit incident wave at a cut, zero unless incident there.
cplx incident_at(const FieldSolution& sol, const ModalCut& mc, int n) {
  if (mc.name != sol.incident_port || n != sol.incident_mode) return 0.0;
  const double beta = std::sin(mc.theta[static_cast<std::size_t>(n)].real()) / mc.ha;
  return std::exp(cplx(0.0, -mc.theta[static_cast<std::size_t>(n)].real() * mc.position / mc.ha)) /
         std::sqrt(2.0 * beta);
}

}  // namespace

void extract_all(FieldSolution& sol) {
  sol.ports.clear();
  for (const auto& mc : sol.mesh->cuts) {
    if (!mc.is_port()) continue;
    const Eigen::VectorXcd c = trace_coefficients(mc, sol.values);
    PortAmplitudes pa;
    pa.port = mc.name;
    for (int n = 0; n < mc.radiating; ++n) {
      const cplx th = mc.theta[static_cast<std::size_t>(n)];
      const cplx a = incident_at(sol, mc, n);
      const cplx scale = std::sqrt(2.0 * std::sin(th) / mc.ha) * std::exp(cplx(0.0, -1.0) * th * mc.position / mc.ha);
      pa.outgoing.push_back((c(n) - a) * scale);
      pa.incoming.push_back(a == 0.0 ? cplx(0.0) : cplx(1.0));
    }
    sol.ports.push_back(std::move(pa));
  }
}

FieldSolution solve_with_incidence(const DiscreteSystem& sys, const std::string& port, int mode) {
  const VecC f = sys.rhs(port, mode);
  FieldSolution sol;
  sol.mesh = sys.mesh;
  sol.incident_port = port;
  sol.incident_mode = mode;
  sol.condition = sys.condition;
  VecC u = sys.lu->solve(f);
  const double fn = std::max(f.norm(), 1e-300);
  double res = (f - sys.matrix * u).norm() / fn;
  for (int it = 0; it < sys.numerics.refine_max && res > sys.numerics.refine_tol; ++it) {
    const VecC r = f - sys.matrix * u;
    u += sys.lu->solve(r);
    const double nr = (f - sys.matrix * u).norm() / fn;
    if (!(nr < res)) {
      res = std::min(res, nr);
      break;
    }
    res = nr;
  }
  if (!std::isfinite(res)) throw SolverError("linear solve produced non-finite values");
  sol.values = std::move(u);
  sol.residual = res;
  if (res > sys.numerics.refine_tol) {
    std::ostringstream os;
    os << "relative residual " << res << " above target " << sys.numerics.refine_tol;
    sol.warnings.push_back(os.str());
  }
  if (sys.numerics.estimate_condition && sys.condition > sys.numerics.condition_warn) {
    std::ostringstream os;
    os << "trapped mode suspected: condition estimate " << sys.condition;
    sol.warnings.push_back(os.str());
  }
  extract_all(sol);
  return sol;
}

cplx extract_amplitude(const FieldSolution& sol, const std::string& port, int n) {
  for (const auto& pa : sol.ports) {
    if (pa.port != port) continue;
    if (n < 0 || n >= static_cast<int>(pa.outgoing.size())) throw SolverError("mode index out of range at port " + port);
    return pa.outgoing[static_cast<std::size_t>(n)];
  }
  throw SolverError("no port named '" + port + "'");
}

void export_field(const FieldSolution& sol, std::ostream& out) {
  const Mesh& m = *sol.mesh;
  std::vector<std::tuple<double, double, cplx>> rows;
  for (int i = 0; i < m.nx(); ++i) {
    for (int j = 0; j < m.ny(); ++j) {
      const auto flat = static_cast<std::size_t>(i * m.ny() + j);
      const double x = m.xs[static_cast<std::size_t>(i)], y = m.ys[static_cast<std::size_t>(j)];
      if (m.index[flat] >= 0) {
        rows.emplace_back(x, y, sol.values(m.index[flat]));
      } else if (m.dirichlet_node[flat]) {
        rows.emplace_back(x, y, cplx(0.0));
      }
    }
  }
  for (const auto& mc : m.cuts) {
    if (mc.depth <= 0.0) continue;
    const Eigen::VectorXcd c = trace_coefficients(mc, sol.values);
    const bool along_x = mc.outward == Axis::PlusX || mc.outward == Axis::MinusX;
    const double sigma = (mc.outward == Axis::PlusX || mc.outward == Axis::PlusY) ? 1.0 : -1.0;
    const double axial0 = along_x ? mc.cut.a.x : mc.cut.a.y;
    const double origin = along_x ? mc.cut.a.y : mc.cut.a.x;
    const int steps = static_cast<int>(std::floor(mc.depth + 1e-9));
    for (int s = 1; s <= steps; ++s) {
      Eigen::VectorXcd e(mc.size());
      for (int n = 0; n < mc.size(); ++n) {
        const cplx th = mc.theta[static_cast<std::size_t>(n)];
        const cplx I(0.0, 1.0);
        if (n < mc.radiating) {
          const cplx a = incident_at(sol, mc, n);
          e(n) = a * std::exp(-I * th * double(s)) + (c(n) - a) * std::exp(I * th * double(s));
        } else if (th.imag() == 0.0) {
          e(n) = c(n) * std::cos(th.real() * (mc.depth - s)) / std::cos(th.real() * mc.depth);
        } else {
          const double kap = th.imag();
          e(n) = c(n) * std::exp(-kap * s) * (1.0 + std::exp(-2.0 * kap * (mc.depth - s))) /
                 (1.0 + std::exp(-2.0 * kap * mc.depth));
        }
      }
      const Eigen::VectorXcd vals = mc.basis.phi.cast<cplx>() * e;
      const double axial = axial0 + sigma * s * mc.ha;
      for (int i = 0; i < mc.size(); ++i) {
        const double t = origin + mc.basis.coords[static_cast<std::size_t>(i)];
        rows.emplace_back(along_x ? axial : t, along_x ? t : axial, vals(i));
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<1>(a), std::get<0>(a)) < std::tie(std::get<1>(b), std::get<0>(b));
  });
  out << "x,y,re,im\n" << std::setprecision(17);
  for (const auto& [x, y, v] : rows) out << x << ',' << y << ',' << v.real() << ',' << v.imag() << '\n';
}

std::string to_string(LinearBackend b) { return b == LinearBackend::UmfPack ? "umfpack" : "sparselu"; }

LinearBackend backend_from_string(const std::string& s) {
  if (s == "umfpack") return LinearBackend::UmfPack;
  if (s == "sparselu") return LinearBackend::SparseLU;
  throw SolverError("unknown linear backend '" + s + "'");
}

std::string to_string(ClosurePolicy c) {
  switch (c) {
    case ClosurePolicy::Always: return "always";
    case ClosurePolicy::Auto: return "auto";
    case ClosurePolicy::Never: return "never";
  }
  return "?";
}

ClosurePolicy closure_from_string(const std::string& s) {
  if (s == "always") return ClosurePolicy::Always;
  if (s == "auto") return ClosurePolicy::Auto;
  if (s == "never") return ClosurePolicy::Never;
  throw SolverError("unknown closure policy '" + s + "'");
}

std::string to_string(GridPolicy g) { return g == GridPolicy::Fitted ? "fitted" : "strict"; }

GridPolicy grid_from_string(const std::string& s) {
  if (s == "fitted") return GridPolicy::Fitted;
  if (s == "strict") return GridPolicy::Strict;
  throw SolverError("unknown grid policy '" + s + "'");
}

}  // namespace wavebranch
