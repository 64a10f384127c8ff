#include "wavebranch/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace wavebranch {

namespace {

bool along_x(Axis a) { return a == Axis::PlusX || a == Axis::MinusX; }
int sigma_of(Axis a) { return (a == Axis::PlusX || a == Axis::PlusY) ? 1 : -1; }

int grid_index(const std::vector<double>& g, double v) {
  auto it = std::lower_bound(g.begin(), g.end(), v - 1e-9);
  if (it == g.end() || std::abs(*it - v) > 1e-9) throw SolverError("coordinate not on the grid");
  return static_cast<int>(it - g.begin());
}

Coefficients finish(Problem p, const DiscreteSystem& sys, const FieldSolution& s) {
  Coefficients c;
  c.problem = p;
  c.condition = sys.condition;
  c.unknowns = sys.mesh->unknowns();
  c.warnings = s.warnings;
  const cplx refl = extract_amplitude(s, "left", 0);
  if (p == Problem::Full) {
    c.R = refl;
    c.T = extract_amplitude(s, "right", 0);
    c.energy_residual = std::abs(std::norm(c.R) + std::norm(c.T) - 1.0);
  } else {
    (p == Problem::HalfNeumann ? c.r : c.R_mix) = refl;
    c.energy_residual = std::abs(std::norm(refl) - 1.0);
  }
  return c;
}

}  // namespace

std::string to_string(Problem p) {
  switch (p) {
    case Problem::Full: return "full";
    case Problem::HalfNeumann: return "half-neumann";
    case Problem::HalfDirichlet: return "half-dirichlet";
  }
  return "?";
}

Coefficients full_scattering(const BranchedGuideParams& g, const Numerics& num) {
  const auto sys = assemble(build_branched_guide(g), num);
  return finish(Problem::Full, sys, solve_with_incidence(sys, "left", 0));
}

Coefficients half_scattering(const BranchedGuideParams& g, BoundaryCondition cut, const Numerics& num) {
  const auto sys = assemble(half_domain(build_branched_guide(g), cut), num);
  const Problem p = cut == BoundaryCondition::Neumann ? Problem::HalfNeumann : Problem::HalfDirichlet;
  return finish(p, sys, solve_with_incidence(sys, "left", 0));
}

std::pair<cplx, cplx> recombine(cplx r, cplx R_mix) { return {0.5 * (r + R_mix), 0.5 * (r - R_mix)}; }

std::pair<cplx, cplx> decompose(cplx R, cplx T) { return {R + T, R - T}; }

Domain limit_domain(const LimitParams& p) {
  BranchedGuideParams g;
  g.ell = p.ell;
  g.L = p.y_cut;
  g.k = p.k;
  g.xmax = p.xmax;
  g.modes = p.modes;
  g.extra = p.extra;
  return truncate_semi_infinite(half_domain(build_branched_guide(g), p.cut), p.y_cut);
}

SMatrix limit_smatrix(const LimitParams& p, const Numerics& num) {
  const Domain d = limit_domain(p);
  const Port& top = d.port("top");
  const int nprop = propagating_count(top.width(), top.lateral, p.k);
  if (nprop > 1) {
    throw RegimeError("the branch carries " + std::to_string(nprop) +
                      " propagating modes; only the one- and zero-mode regimes are supported");
  }
  const auto sys = assemble(d, num);
  SMatrix s;
  s.cut = p.cut;
  s.scalar = nprop == 0;
  auto h = std::make_shared<FieldSolution>(solve_with_incidence(sys, "left", 0));
  s.s00 = extract_amplitude(*h, "left", 0);
  s.warnings = h->warnings;
  if (s.scalar) {
    s.unitarity_residual = std::abs(std::abs(s.s00) - 1.0);
  } else {
    auto v = std::make_shared<FieldSolution>(solve_with_incidence(sys, "top", 0));
    s.s01 = extract_amplitude(*h, "top", 0);
    s.s10 = extract_amplitude(*v, "left", 0);
    s.s11 = extract_amplitude(*v, "top", 0);
    Eigen::Matrix2cd m;
    m << s.s00, s.s01, s.s10, s.s11;
    s.unitarity_residual = (m * m.adjoint() - Eigen::Matrix2cd::Identity()).norm();
    s.symmetry_residual = std::abs(s.s01 - s.s10);
    for (const auto& w : v->warnings) s.warnings.push_back(w);
    s.vertical = v;
  }
  s.horizontal = h;
  return s;
}

cplx symplectic_form(const FieldSolution& u, const FieldSolution& v, bool conjugate_v, int shift) {
  if (u.mesh != v.mesh) throw SolverError("symplectic form needs two fields on the same discretization");
  const Mesh& m = *u.mesh;
  auto value = [&](const VecC& f, int i, int j) -> cplx {
    const auto flat = static_cast<std::size_t>(i * m.ny() + j);
    if (m.dirichlet_node[flat]) return 0.0;
    const int id = m.index[flat];
    if (id < 0) throw SolverError("symplectic line leaves the discretized region");
    return f(id);
  };
  cplx q = 0.0;
  for (const auto& mc : m.cuts) {
    if (!mc.is_port()) continue;
    const bool ax = along_x(mc.outward);
    const int sg = sigma_of(mc.outward);
    const auto& ag = ax ? m.xs : m.ys;
    const auto& tg = ax ? m.ys : m.xs;
    const int l0 = grid_index(ag, ax ? mc.cut.a.x : mc.cut.a.y) - sg * shift;
    const int l1 = l0 - sg;
    if (l1 < 0 || l1 >= static_cast<int>(ag.size())) throw SolverError("symplectic line outside the grid");
    const double hl = std::abs(ag[static_cast<std::size_t>(l0)] - ag[static_cast<std::size_t>(l1)]);
    const double t0 = ax ? std::min(mc.cut.a.y, mc.cut.b.y) : std::min(mc.cut.a.x, mc.cut.b.x);
    const double t1 = ax ? std::max(mc.cut.a.y, mc.cut.b.y) : std::max(mc.cut.a.x, mc.cut.b.x);
    const int j0 = grid_index(tg, t0), j1 = grid_index(tg, t1);
    for (int j = j0; j <= j1; ++j) {
      double w = 0.0;
      if (j > j0) w += 0.5 * (tg[static_cast<std::size_t>(j)] - tg[static_cast<std::size_t>(j - 1)]);
      if (j < j1) w += 0.5 * (tg[static_cast<std::size_t>(j + 1)] - tg[static_cast<std::size_t>(j)]);
      const int i0 = ax ? l0 : j, jj0 = ax ? j : l0, i1 = ax ? l1 : j, jj1 = ax ? j : l1;
      const cplx u0 = value(u.values, i0, jj0), u1 = value(u.values, i1, jj1);
      cplx v0 = value(v.values, i0, jj0), v1 = value(v.values, i1, jj1);
      if (!conjugate_v) {
        v0 = std::conj(v0);
        v1 = std::conj(v1);
      }
      q += w / hl * (u0 * v1 - u1 * v0);
    }
  }
  return q;
}

SymplecticReport symplectic_check(const SMatrix& s, int shift) {
  if (s.scalar || !s.vertical) throw RegimeError("symplectic check needs the 2x2 scattering matrix");
  const FieldSolution& h = *s.horizontal;
  const FieldSolution& v = *s.vertical;
  const cplx I(0.0, 1.0);
  SymplecticReport rep;
  rep.q_hh = symplectic_form(h, h, false, shift);
  rep.q_vv = symplectic_form(v, v, false, shift);
  rep.q_hv = symplectic_form(h, v, false, shift);
  rep.q_h_conj_v = symplectic_form(h, v, true, shift);
  const cplx e_hh = (-1.0 + std::norm(s.s00) + std::norm(s.s01)) * I;
  const cplx e_vv = (-1.0 + std::norm(s.s10) + std::norm(s.s11)) * I;
  const cplx e_hv = (s.s00 * std::conj(s.s10) + s.s01 * std::conj(s.s11)) * I;
  const cplx e_hc = s.s01 - s.s10;
  rep.residual = std::max({std::abs(rep.q_hh - e_hh), std::abs(rep.q_vv - e_vv), std::abs(rep.q_hv - e_hv),
                           std::abs(rep.q_h_conj_v - e_hc)});
  return rep;
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

void to_json(nlohmann::json& j, const Coefficients& c) {
  j = nlohmann::json{{"problem", to_string(c.problem)},
                     {"energy_residual", c.energy_residual},
                     {"condition", c.condition},
                     {"unknowns", c.unknowns},
                     {"warnings", c.warnings}};
  if (c.problem == Problem::Full) {
    j["R"] = complex_json(c.R);
    j["T"] = complex_json(c.T);
  } else if (c.problem == Problem::HalfNeumann) {
    j["r"] = complex_json(c.r);
  } else {
    j["R_mix"] = complex_json(c.R_mix);
  }
}

void to_json(nlohmann::json& j, const SMatrix& s) {
  j = nlohmann::json{{"cut", to_string(s.cut)},
                     {"scalar", s.scalar},
                     {"unitarity_residual", s.unitarity_residual},
                     {"symmetry_residual", s.symmetry_residual},
                     {"warnings", s.warnings}};
  if (s.scalar) {
    j["R_inf"] = complex_json(s.s00);
  } else {
    j["matrix"] = nlohmann::json::array({complex_json(s.s00), complex_json(s.s01), complex_json(s.s10),
                                         complex_json(s.s11)});
  }
}

}  // namespace wavebranch
