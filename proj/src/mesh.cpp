#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "internal.hpp"
#include "wavebranch/solver.hpp"

namespace wavebranch {

namespace {

constexpr double kTol = 1e-9;

// A uniform duct that is replaced by a modal cut: either the lead behind a
// port or a branch closed by a wall.
struct Reduction {
  std::optional<std::size_t> port;
  std::optional<std::size_t> rect;
  bool along_x = true;
  int sigma = 1;         // +1 when the duct extends towards +axis
  double p = 0.0;        // far end (port or wall)
  double q = 0.0;        // junction coordinate
  double t0 = 0.0, t1 = 0.0;
  bool full_cover = true;
  LateralBc lateral = LateralBc::NN;
  bool dirichlet_at_t0 = false;
  double ha = 0.0;
  double cut = 0.0;
  double depth = 0.0;
};

bool intersects(double a0, double a1, double b0, double b1) { return a1 >= b0 - kTol && a0 <= b1 + kTol; }

std::vector<double> uniq(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || std::abs(out.back() - x) > kTol) out.push_back(x);
  }
  return out;
}

bool dom_contains(const Domain& d, bool along_x, double a, double t) {
  return along_x ? d.contains(a, t) : d.contains(t, a);
}

// Nearest coordinate inward from p at which the duct cross-section [t0, t1] may change.
std::optional<double> find_junction(const Domain& d, bool along_x, int sigma, double p, double t0, double t1) {
  std::vector<double> cand;
  for (const auto& r : d.rects()) {
    const double rt0 = along_x ? r.y0 : r.x0, rt1 = along_x ? r.y1 : r.x1;
    if (intersects(rt0, rt1, t0, t1)) {
      cand.push_back(along_x ? r.x0 : r.y0);
      cand.push_back(along_x ? r.x1 : r.y1);
    }
  }
  for (const auto& pt : d.ports()) {
    const bool vcut = pt.cut.a.x == pt.cut.b.x;
    if (vcut != along_x) continue;
    const double pt0 = along_x ? std::min(pt.cut.a.y, pt.cut.b.y) : std::min(pt.cut.a.x, pt.cut.b.x);
    const double pt1 = along_x ? std::max(pt.cut.a.y, pt.cut.b.y) : std::max(pt.cut.a.x, pt.cut.b.x);
    if (intersects(pt0, pt1, t0, t1)) cand.push_back(along_x ? pt.cut.a.x : pt.cut.a.y);
  }
  for (const auto& s : d.dirichlet()) {
    const double lo = std::min(s.a.y, s.b.y), hi = std::max(s.a.y, s.b.y);
    if (along_x) {
      if (intersects(lo, hi, t0, t1)) cand.push_back(s.a.x);
    } else if (s.a.x >= t0 - kTol && s.a.x <= t1 + kTol) {
      cand.push_back(lo);
      cand.push_back(hi);
    }
  }
  if (along_x && d.mirror_symmetric()) cand.push_back(0.0);
  std::optional<double> q;
  for (double c : cand) {
    if (sigma * c < sigma * p - kTol && (!q || sigma * c > sigma * *q)) q = c;
  }
  if (!q) return std::nullopt;
  // The cross-section over the open slab must be exactly [t0, t1].
  const double mid = 0.5 * (p + *q);
  std::vector<double> tb{t0, t1};
  for (const auto& r : d.rects()) {
    for (double t : along_x ? std::array<double, 2>{r.y0, r.y1} : std::array<double, 2>{r.x0, r.x1}) {
      if (t > t0 && t < t1) tb.push_back(t);
    }
  }
  tb = uniq(tb);
  for (std::size_t i = 0; i + 1 < tb.size(); ++i) {
    if (!dom_contains(d, along_x, mid, 0.5 * (tb[i] + tb[i + 1]))) return std::nullopt;
  }
  if (dom_contains(d, along_x, mid, t0 - 1e-7) || dom_contains(d, along_x, mid, t1 + 1e-7)) return std::nullopt;
  return q;
}

// Dirichlet coverage of the side x = xs over [lo, hi].
bool side_dirichlet(const Domain& d, double xs, double lo, double hi) {
  for (const auto& s : d.dirichlet()) {
    const double a = std::min(s.a.y, s.b.y), b = std::max(s.a.y, s.b.y);
    if (std::abs(s.a.x - xs) < kTol && a <= lo + kTol && b >= hi - kTol) return true;
  }
  return false;
}

std::vector<Reduction> plan_reductions(const Domain& d, const Numerics& num) {
  std::vector<Reduction> out;
  if (num.reduce_leads) {
    for (std::size_t i = 0; i < d.ports().size(); ++i) {
      const Port& pt = d.ports()[i];
      Reduction r;
      r.port = i;
      r.along_x = pt.outward == Axis::PlusX || pt.outward == Axis::MinusX;
      r.sigma = (pt.outward == Axis::PlusX || pt.outward == Axis::PlusY) ? 1 : -1;
      r.p = r.along_x ? pt.cut.a.x : pt.cut.a.y;
      r.t0 = r.along_x ? std::min(pt.cut.a.y, pt.cut.b.y) : std::min(pt.cut.a.x, pt.cut.b.x);
      r.t1 = r.along_x ? std::max(pt.cut.a.y, pt.cut.b.y) : std::max(pt.cut.a.x, pt.cut.b.x);
      r.lateral = pt.lateral;
      const auto q = find_junction(d, r.along_x, r.sigma, r.p, r.t0, r.t1);
      if (!q) continue;
      r.q = *q;
      const double len = std::abs(r.p - r.q);
      const double cells = std::max(1.0, std::round(len / num.h));
      if (cells < 2.0) continue;
      r.ha = len / cells;
      r.cut = r.q + r.sigma * r.ha;
      r.depth = cells - 1.0;
      out.push_back(r);
    }
  }
  if (num.closure == ClosurePolicy::Never) return out;
  for (std::size_t ri = 0; ri < d.rects().size(); ++ri) {
    const Rect& rc = d.rects()[ri];
    bool wall_top = true;
    for (const auto& pt : d.ports()) {
      if (pt.cut.a.y == pt.cut.b.y && std::abs(pt.cut.a.y - rc.y1) < kTol &&
          intersects(std::min(pt.cut.a.x, pt.cut.b.x), std::max(pt.cut.a.x, pt.cut.b.x), rc.x0, rc.x1)) {
        wall_top = false;
      }
    }
    const int probes = 16;
    for (int s = 0; s < probes && wall_top; ++s) {
      const double x = rc.x0 + (rc.x1 - rc.x0) * (s + 0.5) / probes;
      if (d.contains(x, rc.y1 + 1e-7)) wall_top = false;
    }
    if (!wall_top) continue;
    const auto q = find_junction(d, false, 1, rc.y1, rc.x0, rc.x1);
    if (!q) continue;
    bool any_below = false, all_below = true;
    for (int s = 0; s < probes; ++s) {
      const double x = rc.x0 + (rc.x1 - rc.x0) * (s + 0.5) / probes;
      const bool b = d.contains(x, *q - 1e-7);
      any_below = any_below || b;
      all_below = all_below && b;
    }
    if (!any_below) continue;
    Reduction r;
    r.rect = ri;
    r.along_x = false;
    r.sigma = 1;
    r.p = rc.y1;
    r.q = *q;
    r.t0 = rc.x0;
    r.t1 = rc.x1;
    r.full_cover = all_below;
    const bool d0 = side_dirichlet(d, rc.x0, r.q, r.p), d1 = side_dirichlet(d, rc.x1, r.q, r.p);
    if (d0 && d1) continue;
    r.lateral = (d0 || d1) ? LateralBc::DN : LateralBc::NN;
    r.dirichlet_at_t0 = d0;
    r.ha = num.h;
    const double total = (r.p - r.q) / num.h;
    const bool aligned = std::abs(total - std::round(total)) < 1e-9 * std::max(1.0, total);
    if (num.closure == ClosurePolicy::Auto && aligned) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<double> fit_grid(const std::vector<double>& breaks, const Numerics& num) {
  std::vector<double> g;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double b0 = breaks[i], b1 = breaks[i + 1];
    const double ratio = (b1 - b0) / num.h;
    if (num.grid == GridPolicy::Strict && std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw GeometryError("geometry not grid-aligned: interval [" + std::to_string(b0) + ", " + std::to_string(b1) +
                          "] is not a multiple of h");
    }
    const long n = std::max(1L, std::lround(ratio));
    for (long c = 0; c < n; ++c) g.push_back(b0 + (b1 - b0) * static_cast<double>(c) / static_cast<double>(n));
  }
  g.push_back(breaks.back());
  return g;
}

int locate(const std::vector<double>& g, double v) {
  auto it = std::lower_bound(g.begin(), g.end(), v - kTol);
  if (it == g.end() || std::abs(*it - v) > kTol) throw SolverError("internal: coordinate not on the grid");
  return static_cast<int>(it - g.begin());
}

// Transverse nodes of a cut ordered from the origin side.
struct CutNodes {
  std::vector<double> coords;
  std::vector<bool> dirichlet;
  std::vector<int> unknowns;
};

CutNodes gather_cut(const Mesh& m, bool along_x, double axial, double t0, double t1, double origin, bool reversed) {
  CutNodes c;
  const auto& tg = along_x ? m.ys : m.xs;
  const int ia = locate(along_x ? m.xs : m.ys, axial);
  std::vector<int> idx;
  for (int t = 0; t < static_cast<int>(tg.size()); ++t) {
    if (tg[static_cast<std::size_t>(t)] >= t0 - kTol && tg[static_cast<std::size_t>(t)] <= t1 + kTol) idx.push_back(t);
  }
  if (reversed) std::reverse(idx.begin(), idx.end());
  for (int t : idx) {
    const int i = along_x ? ia : t, j = along_x ? t : ia;
    const auto flat = static_cast<std::size_t>(i * m.ny() + j);
    c.coords.push_back(tg[static_cast<std::size_t>(t)] - origin);
    c.dirichlet.push_back(m.dirichlet_node[flat]);
    c.unknowns.push_back(m.index[flat]);
    if (!m.dirichlet_node[flat] && m.index[flat] < 0) throw SolverError("internal: modal cut node is not an unknown");
  }
  return c;
}

}  // namespace

const ModalCut& Mesh::cut(const std::string& name) const {
  auto i = cut_index(name);
  if (!i) throw SolverError("no port named '" + name + "' in the discrete system");
  return cuts[*i];
}

std::optional<std::size_t> Mesh::cut_index(const std::string& name) const {
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i].name == name) return i;
  }
  return std::nullopt;
}

Mesh build_mesh(const Domain& d, const Numerics& num, bool ducts_at_junction) {
  if (!(num.h > 0.0)) throw SolverError("grid spacing h must be positive");
  d.validate();
  const double k = d.k();
  auto reds = plan_reductions(d, num);

  Mesh m;
  m.k = k;
  std::vector<double> xb = d.x_breaks(), yb = d.y_breaks();
  for (const auto& pt : d.ports()) {
    xb.push_back(pt.cut.a.x);
    xb.push_back(pt.cut.b.x);
    yb.push_back(pt.cut.a.y);
    yb.push_back(pt.cut.b.y);
  }
  for (const auto& s : d.dirichlet()) {
    xb.push_back(s.a.x);
    yb.push_back(s.a.y);
    yb.push_back(s.b.y);
  }
  if (d.mirror_symmetric()) xb.push_back(0.0);
  for (const auto& r : reds) {
    if (r.port) (r.along_x ? xb : yb).push_back(r.cut);
  }
  m.xs = fit_grid(uniq(xb), num);

  // Closed ducts: pick the cut row so that no propagating mode sits near a
  // resonance of the reduced duct.
  for (auto& r : reds) {
    if (r.port) continue;
    const double total = (r.p - r.q) / num.h;
    const int m_min = (ducts_at_junction && r.full_cover) ? 0 : 1;
    int m_max = static_cast<int>(std::floor(total + 1e-9));
    if (m_max < m_min) m_max = m_min;
    int best = m_min;
    if (!ducts_at_junction && m_max > m_min) {
      std::vector<double> coords;
      std::vector<bool> dir;
      std::vector<int> unk;
      const double origin = r.dirichlet_at_t0 ? r.t0 : (r.lateral == LateralBc::DN ? r.t1 : r.t0);
      for (double x : m.xs) {
        if (x >= r.t0 - kTol && x <= r.t1 + kTol) {
          coords.push_back(x - origin);
          dir.push_back(r.lateral == LateralBc::DN && std::abs(x - origin) < kTol);
          unk.push_back(0);
        }
      }
      const auto basis = detail::make_cut_basis(coords, dir, unk, r.lateral, r.t1 - r.t0);
      const auto th = detail::axial_phases(basis.mu, k, num.h);
      double best_score = -1.0;
      for (int c = m_min; c <= m_max; ++c) {
        double score = 1.0;
        for (const auto& t : th) {
          if (t.imag() == 0.0) score = std::min(score, std::abs(std::cos(t.real() * (total - c))));
        }
        if (score > best_score + 1e-12) {
          best_score = score;
          best = c;
        }
        if (score >= 0.5) break;
      }
    }
    r.cut = r.q + best * num.h;
    r.depth = total - best;
    if (r.depth < -kTol) throw SolverError("internal: negative duct depth");
    r.depth = std::max(0.0, r.depth);
    yb.push_back(r.cut);
  }
  m.ys = fit_grid(uniq(yb), num);

  const int nx = m.nx(), ny = m.ny();
  auto reduced = [&](double x, double y) {
    for (const auto& r : reds) {
      const double a = r.along_x ? x : y, t = r.along_x ? y : x;
      const double lo = std::min(r.cut, r.p), hi = std::max(r.cut, r.p);
      if (a > lo && a < hi && t > r.t0 && t < r.t1) return true;
    }
    return false;
  };
  m.active_cell.assign(static_cast<std::size_t>((nx - 1) * (ny - 1)), false);
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      const double xc = 0.5 * (m.xs[static_cast<std::size_t>(i)] + m.xs[static_cast<std::size_t>(i + 1)]);
      const double yc = 0.5 * (m.ys[static_cast<std::size_t>(j)] + m.ys[static_cast<std::size_t>(j + 1)]);
      m.active_cell[static_cast<std::size_t>(i * (ny - 1) + j)] = d.contains(xc, yc) && !reduced(xc, yc);
    }
  }
  auto cell_on = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= nx - 1 || j >= ny - 1) return false;
    return static_cast<bool>(m.active_cell[static_cast<std::size_t>(i * (ny - 1) + j)]);
  };
  m.index.assign(static_cast<std::size_t>(nx * ny), -1);
  m.dirichlet_node.assign(static_cast<std::size_t>(nx * ny), false);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      if (!(cell_on(i - 1, j - 1) || cell_on(i, j - 1) || cell_on(i - 1, j) || cell_on(i, j))) continue;
      const auto flat = static_cast<std::size_t>(i * ny + j);
      if (d.boundary_tag(m.xs[static_cast<std::size_t>(i)], m.ys[static_cast<std::size_t>(j)]) ==
          BoundaryCondition::Dirichlet) {
        m.dirichlet_node[flat] = true;
        continue;
      }
      m.index[flat] = static_cast<int>(m.node_i.size());
      m.node_i.push_back(i);
      m.node_j.push_back(j);
    }
  }
  if (m.unknowns() == 0) throw SolverError("discretization has no unknowns");

  // Modal cuts: every port (at its reduced position if any) and every closed duct.
  std::vector<bool> port_done(d.ports().size(), false);
  auto add_cut = [&](ModalCut mc, bool along_x, double axial, double t0, double t1, double origin, bool reversed,
                     double width) {
    auto nodes = gather_cut(m, along_x, axial, t0, t1, origin, reversed);
    mc.basis = detail::make_cut_basis(nodes.coords, nodes.dirichlet, nodes.unknowns, mc.lateral, width);
    mc.theta = detail::axial_phases(mc.basis.mu, k, mc.ha);
    mc.radiating = std::min(mc.radiating, mc.size());
    m.cuts.push_back(std::move(mc));
  };
  for (const auto& r : reds) {
    ModalCut mc;
    mc.outward = r.along_x ? (r.sigma > 0 ? Axis::PlusX : Axis::MinusX) : (r.sigma > 0 ? Axis::PlusY : Axis::MinusY);
    mc.lateral = r.lateral;
    mc.ha = r.ha;
    mc.depth = r.depth;
    mc.position = r.sigma * r.cut;
    double origin = 0.0;
    bool reversed = false;
    if (r.port) {
      const Port& pt = d.ports()[*r.port];
      port_done[*r.port] = true;
      mc.name = pt.name;
      mc.radiating = pt.modes;
      mc.cut = pt.cut;
      if (r.along_x) {
        mc.cut.a.x = mc.cut.b.x = r.cut;
        origin = pt.cut.a.y;
        reversed = pt.cut.b.y < pt.cut.a.y;
      } else {
        mc.cut.a.y = mc.cut.b.y = r.cut;
        origin = pt.cut.a.x;
        reversed = pt.cut.b.x < pt.cut.a.x;
      }
    } else {
      mc.name = "duct:" + std::to_string(*r.rect);
      mc.rect = r.rect;
      mc.radiating = 0;
      const bool from_t1 = r.lateral == LateralBc::DN && !r.dirichlet_at_t0;
      origin = from_t1 ? r.t1 : r.t0;
      reversed = from_t1;
      mc.cut = from_t1 ? Segment{{r.t1, r.cut}, {r.t0, r.cut}} : Segment{{r.t0, r.cut}, {r.t1, r.cut}};
    }
    add_cut(std::move(mc), r.along_x, r.cut, r.t0, r.t1, origin, reversed, r.t1 - r.t0);
  }
  for (std::size_t i = 0; i < d.ports().size(); ++i) {
    if (port_done[i]) continue;
    const Port& pt = d.ports()[i];
    ModalCut mc;
    mc.name = pt.name;
    mc.outward = pt.outward;
    mc.lateral = pt.lateral;
    mc.cut = pt.cut;
    mc.radiating = pt.modes;
    mc.depth = 0.0;
    mc.position = pt.outward_coordinate();
    const bool along_x = pt.outward == Axis::PlusX || pt.outward == Axis::MinusX;
    const int sigma = (pt.outward == Axis::PlusX || pt.outward == Axis::PlusY) ? 1 : -1;
    const auto& ag = along_x ? m.xs : m.ys;
    const double axial = along_x ? pt.cut.a.x : pt.cut.a.y;
    const int ia = locate(ag, axial);
    const int inner = ia - sigma;
    if (inner < 0 || inner >= static_cast<int>(ag.size())) throw SolverError("port '" + pt.name + "' has no interior cells");
    mc.ha = std::abs(ag[static_cast<std::size_t>(ia)] - ag[static_cast<std::size_t>(inner)]);
    const double t0 = along_x ? std::min(pt.cut.a.y, pt.cut.b.y) : std::min(pt.cut.a.x, pt.cut.b.x);
    const double t1 = along_x ? std::max(pt.cut.a.y, pt.cut.b.y) : std::max(pt.cut.a.x, pt.cut.b.x);
    const double origin = along_x ? pt.cut.a.y : pt.cut.a.x;
    const bool reversed = along_x ? pt.cut.b.y < pt.cut.a.y : pt.cut.b.x < pt.cut.a.x;
    add_cut(std::move(mc), along_x, axial, t0, t1, origin, reversed, t1 - t0);
  }
  return m;
}

}  // namespace wavebranch
