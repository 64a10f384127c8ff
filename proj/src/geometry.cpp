#include "wavebranch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace wavebranch {

namespace {

constexpr double kGeomTol = 1e-12;

bool near(double a, double b) { return std::abs(a - b) <= kGeomTol * (1.0 + std::abs(a) + std::abs(b)); }

// Two rectangles are linked when they overlap or share an edge of positive length.
bool linked(const Rect& a, const Rect& b) {
  const double ox = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double oy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (ox > kGeomTol && oy > kGeomTol) return true;
  if (ox > kGeomTol && std::abs(oy) <= kGeomTol) return true;
  if (oy > kGeomTol && std::abs(ox) <= kGeomTol) return true;
  return false;
}

std::vector<double> unique_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || !near(out.back(), x)) out.push_back(x);
  }
  return out;
}

bool on_segment(const Segment& s, double x, double y) {
  const double xlo = std::min(s.a.x, s.b.x), xhi = std::max(s.a.x, s.b.x);
  const double ylo = std::min(s.a.y, s.b.y), yhi = std::max(s.a.y, s.b.y);
  return x >= xlo - kGeomTol && x <= xhi + kGeomTol && y >= ylo - kGeomTol &&
         y <= yhi + kGeomTol;
}

bool port_is_vertical_cut(const Port& p) { return p.outward == Axis::PlusX || p.outward == Axis::MinusX; }

}  // namespace

Rect::Rect(double x0_, double x1_, double y0_, double y1_) : x0(x0_), x1(x1_), y0(y0_), y1(y1_) {
  if (!(x0 < x1) || !(y0 < y1)) throw GeometryError("degenerate rectangle: require x0 < x1 and y0 < y1");
}

double Segment::length() const { return std::abs(b.x - a.x) + std::abs(b.y - a.y); }

double Port::outward_coordinate() const {
  switch (outward) {
    case Axis::PlusX: return cut.a.x;
    case Axis::MinusX: return -cut.a.x;
    case Axis::PlusY: return cut.a.y;
    case Axis::MinusY: return -cut.a.y;
  }
  return 0.0;
}

Domain::Domain(double k, std::vector<Rect> rects, std::vector<Port> ports, std::vector<Segment> dirichlet)
    : k_(k), rects_(std::move(rects)), ports_(std::move(ports)), dirichlet_(std::move(dirichlet)) {
  validate();
}

const Port& Domain::port(const std::string& name) const {
  auto idx = port_index(name);
  if (!idx) throw GeometryError("unknown port '" + name + "'");
  return ports_[*idx];
}

std::optional<std::size_t> Domain::port_index(const std::string& name) const {
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    if (ports_[i].name == name) return i;
  }
  return std::nullopt;
}

bool Domain::contains(double x, double y) const {
  // A point on a shared internal edge is interior; probe the four diagonal neighbours.
  for (const auto& r : rects_) {
    if (r.contains(x, y)) return true;
  }
  const double e = 1e-9;
  bool all = true;
  for (double dx : {-e, e}) {
    for (double dy : {-e, e}) {
      bool in = false;
      for (const auto& r : rects_) in = in || r.contains(x + dx, y + dy);
      all = all && in;
    }
  }
  return all;
}

bool Domain::contains_closed(double x, double y) const {
  for (const auto& r : rects_) {
    if (x >= r.x0 - kGeomTol && x <= r.x1 + kGeomTol && y >= r.y0 - kGeomTol && y <= r.y1 + kGeomTol) return true;
  }
  return false;
}

BoundaryCondition Domain::boundary_tag(double x, double y) const {
  for (const auto& s : dirichlet_) {
    if (on_segment(s, x, y)) return BoundaryCondition::Dirichlet;
  }
  return BoundaryCondition::Neumann;
}

std::vector<double> Domain::x_breaks() const {
  std::vector<double> v;
  for (const auto& r : rects_) {
    v.push_back(r.x0);
    v.push_back(r.x1);
  }
  return unique_sorted(v);
}

std::vector<double> Domain::y_breaks() const {
  std::vector<double> v;
  for (const auto& r : rects_) {
    v.push_back(r.y0);
    v.push_back(r.y1);
  }
  return unique_sorted(v);
}

bool Domain::mirror_symmetric() const {
  std::vector<double> xs = x_breaks();
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) xs.push_back(-xs[i]);
  xs = unique_sorted(xs);
  const auto ys = y_breaks();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double xc = 0.5 * (xs[i] + xs[i + 1]);
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double yc = 0.5 * (ys[j] + ys[j + 1]);
      if (contains(xc, yc) != contains(-xc, yc)) return false;
    }
  }
  return true;
}

void Domain::validate() const {
  if (!(k_ > 0.0 && k_ < std::numbers::pi)) {
    throw GeometryError("wavenumber k must lie in (0, pi) so that the unit-height guide carries one propagating mode");
  }
  if (rects_.empty()) throw GeometryError("domain has no rectangles");
  for (const auto& r : rects_) {
    if (!(r.x0 < r.x1) || !(r.y0 < r.y1)) throw GeometryError("degenerate rectangle");
  }
  // Connectivity by breadth-first search on the rectangle adjacency graph.
  std::vector<bool> seen(rects_.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < rects_.size(); ++j) {
      if (!seen[j] && linked(rects_[i], rects_[j])) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw GeometryError("domain interior is not connected");

  std::set<std::string> names;
  for (const auto& p : ports_) {
    if (!names.insert(p.name).second) throw GeometryError("duplicate port name '" + p.name + "'");
    if (p.modes < 1) throw GeometryError("port '" + p.name + "': truncation count must be >= 1");
    const bool vcut = p.cut.a.x == p.cut.b.x;
    const bool hcut = p.cut.a.y == p.cut.b.y;
    if (vcut == hcut) throw GeometryError("port '" + p.name + "': cut must be a non-degenerate axis-aligned segment");
    if (vcut != port_is_vertical_cut(p)) throw GeometryError("port '" + p.name + "': outward axis must be normal to the cut");
    const double mx = 0.5 * (p.cut.a.x + p.cut.b.x), my = 0.5 * (p.cut.a.y + p.cut.b.y);
    double nx = 0.0, ny = 0.0;
    switch (p.outward) {
      case Axis::PlusX: nx = 1; break;
      case Axis::MinusX: nx = -1; break;
      case Axis::PlusY: ny = 1; break;
      case Axis::MinusY: ny = -1; break;
    }
    const double e = 1e-7;
    if (!contains(mx - e * nx, my - e * ny) || contains(mx + e * nx, my + e * ny)) {
      throw GeometryError("port '" + p.name + "': cut must lie on the domain boundary with the domain behind it");
    }
    // Endpoints must sit on walls: just beyond each endpoint along the cut is outside.
    const double tx = vcut ? 0.0 : (p.cut.b.x > p.cut.a.x ? 1.0 : -1.0);
    const double ty = vcut ? (p.cut.b.y > p.cut.a.y ? 1.0 : -1.0) : 0.0;
    if (contains(p.cut.a.x - e * tx - e * nx, p.cut.a.y - e * ty - e * ny) ||
        contains(p.cut.b.x + e * tx - e * nx, p.cut.b.y + e * ty - e * ny)) {
      throw GeometryError("port '" + p.name + "': cut endpoints must lie on walls");
    }
  }
  for (const auto& s : dirichlet_) {
    if (!s.vertical() || s.a.x != 0.0) {
      throw GeometryError("Dirichlet tags are only allowed on the symmetry cut x = 0");
    }
  }
}

Domain build_branched_guide(const BranchedGuideParams& p) {
  if (!(p.ell > 0.0)) throw GeometryError("branch width ell must be positive");
  if (!(p.L > 1.0)) throw GeometryError("branch height L must exceed 1");
  if (!(p.k > 0.0 && p.k < std::numbers::pi)) throw GeometryError("k must lie in (0, pi)");
  if (p.modes < 1) throw GeometryError("mode count must be >= 1");
  std::vector<Rect> rects;
  rects.emplace_back(-p.xmax, p.xmax, 0.0, 1.0);
  rects.emplace_back(-p.ell / 2, p.ell / 2, 1.0, p.L);
  double reach = p.ell / 2;
  std::vector<std::pair<double, double>> spans{{-p.ell / 2, p.ell / 2}};
  for (const auto& e : p.extra) {
    if (!(e.height > 1.0)) throw GeometryError("side branch height gamma must exceed 1");
    if (!(e.width > 0.0)) throw GeometryError("side branch width must be positive");
    if (!(e.offset - e.width / 2 > p.ell / 2)) {
      throw GeometryError("geometry conflict: side branch at offset " + std::to_string(e.offset) +
                          " overlaps the central branch");
    }
    for (double s : {-1.0, 1.0}) {
      const double a = s * e.offset - e.width / 2, b = s * e.offset + e.width / 2;
      for (const auto& [c, d] : spans) {
        if (a < d && c < b) throw GeometryError("geometry conflict: overlapping side branches");
      }
      spans.emplace_back(a, b);
      rects.emplace_back(a, b, 1.0, e.height);
    }
    reach = std::max(reach, e.offset + e.width / 2);
  }
  if (!(p.xmax > reach)) throw GeometryError("xmax must exceed every branch half-extent");
  std::vector<Port> ports;
  ports.push_back(Port{"left", Segment{{-p.xmax, 0.0}, {-p.xmax, 1.0}}, Axis::MinusX, LateralBc::NN, p.modes});
  ports.push_back(Port{"right", Segment{{p.xmax, 0.0}, {p.xmax, 1.0}}, Axis::PlusX, LateralBc::NN, p.modes});
  return Domain(p.k, std::move(rects), std::move(ports));
}

Domain half_domain(const Domain& d, BoundaryCondition bc) {
  if (!d.mirror_symmetric()) throw GeometryError("half_domain requires a domain symmetric under x -> -x");
  std::vector<Rect> rects;
  std::vector<Segment> dir;
  for (const auto& r : d.rects()) {
    if (r.x0 >= 0.0) continue;
    Rect c = r;
    if (c.x1 > 0.0) {
      c.x1 = 0.0;
      if (bc == BoundaryCondition::Dirichlet) dir.push_back(Segment{{0.0, c.y0}, {0.0, c.y1}});
    }
    rects.push_back(c);
  }
  std::vector<Port> ports;
  for (const auto& p : d.ports()) {
    if (port_is_vertical_cut(p)) {
      if (p.cut.a.x < 0.0) ports.push_back(p);
      continue;
    }
    const double xa = std::min(p.cut.a.x, p.cut.b.x), xb = std::max(p.cut.a.x, p.cut.b.x);
    if (xb <= 0.0) {
      ports.push_back(p);
    } else if (xa < 0.0) {
      Port h = p;
      const double y = p.cut.a.y;
      if (bc == BoundaryCondition::Dirichlet) {
        h.cut = Segment{{0.0, y}, {xa, y}};
        h.lateral = LateralBc::DN;
      } else {
        h.cut = Segment{{xa, y}, {0.0, y}};
      }
      ports.push_back(h);
    }
  }
  return Domain(d.k(), std::move(rects), std::move(ports), std::move(dir));
}

Domain truncate_semi_infinite(const Domain& d, double y_cut) {
  if (!(y_cut > 1.0)) throw GeometryError("y_cut must exceed 1");
  std::vector<Rect> rects = d.rects();
  std::optional<std::size_t> branch;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto& r = rects[i];
    if (r.y0 >= 1.0 && r.x0 < 0.0 && r.x1 >= 0.0) branch = i;
  }
  if (!branch) throw GeometryError("no branch touching x = 0 to truncate");
  Rect& r = rects[*branch];
  const double old_top = r.y1;
  r.y1 = y_cut;
  const bool half = r.x1 == 0.0;
  std::vector<Segment> dir;
  bool dirichlet_side = false;
  for (const auto& s : d.dirichlet()) {
    const double lo = std::min(s.a.y, s.b.y), hi = std::max(s.a.y, s.b.y);
    if (half && lo < old_top - kGeomTol && hi > r.y0 + kGeomTol) {
      dirichlet_side = true;
      dir.push_back(Segment{{0.0, r.y0}, {0.0, y_cut}});
    } else {
      dir.push_back(s);
    }
  }
  std::vector<Port> ports;
  for (const auto& p : d.ports()) {
    if (p.outward == Axis::PlusY && p.cut.a.y >= 1.0 && std::min(p.cut.a.x, p.cut.b.x) < 0.0 &&
        std::max(p.cut.a.x, p.cut.b.x) >= 0.0) {
      continue;  // an existing top port on this branch is replaced
    }
    ports.push_back(p);
  }
  const int modes = d.ports().empty() ? 20 : d.ports().front().modes;
  Port top;
  top.name = "top";
  top.outward = Axis::PlusY;
  top.modes = modes;
  if (half && dirichlet_side) {
    top.cut = Segment{{0.0, y_cut}, {r.x0, y_cut}};
    top.lateral = LateralBc::DN;
  } else {
    top.cut = Segment{{r.x0, y_cut}, {r.x1, y_cut}};
    top.lateral = LateralBc::NN;
  }
  ports.push_back(top);
  return Domain(d.k(), std::move(rects), std::move(ports), std::move(dir));
}

std::string to_string(Axis a) {
  switch (a) {
    case Axis::PlusX: return "+x";
    case Axis::MinusX: return "-x";
    case Axis::PlusY: return "+y";
    case Axis::MinusY: return "-y";
  }
  return "?";
}

std::string to_string(LateralBc bc) { return bc == LateralBc::NN ? "NN" : "DN"; }

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet"; }

Axis axis_from_string(const std::string& s) {
  if (s == "+x") return Axis::PlusX;
  if (s == "-x") return Axis::MinusX;
  if (s == "+y") return Axis::PlusY;
  if (s == "-y") return Axis::MinusY;
  throw GeometryError("unknown axis '" + s + "'");
}

LateralBc lateral_from_string(const std::string& s) {
  if (s == "NN") return LateralBc::NN;
  if (s == "DN") return LateralBc::DN;
  throw GeometryError("unknown lateral boundary condition '" + s + "'");
}

BoundaryCondition bc_from_string(const std::string& s) {
  if (s == "neumann") return BoundaryCondition::Neumann;
  if (s == "dirichlet" || s == "mixed") return BoundaryCondition::Dirichlet;
  throw GeometryError("unknown boundary condition '" + s + "'");
}

void to_json(nlohmann::json& j, const Rect& r) { j = nlohmann::json::array({r.x0, r.x1, r.y0, r.y1}); }

void from_json(const nlohmann::json& j, Rect& r) {
  r = Rect(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(), j.at(3).get<double>());
}

void to_json(nlohmann::json& j, const Segment& s) { j = nlohmann::json::array({s.a.x, s.a.y, s.b.x, s.b.y}); }

void from_json(const nlohmann::json& j, Segment& s) {
  s = Segment{{j.at(0).get<double>(), j.at(1).get<double>()}, {j.at(2).get<double>(), j.at(3).get<double>()}};
}

void to_json(nlohmann::json& j, const Port& p) {
  j = nlohmann::json{{"name", p.name},
                     {"cut", p.cut},
                     {"outward", to_string(p.outward)},
                     {"lateral", to_string(p.lateral)},
                     {"modes", p.modes}};
}

void from_json(const nlohmann::json& j, Port& p) {
  p.name = j.at("name").get<std::string>();
  p.cut = j.at("cut").get<Segment>();
  p.outward = axis_from_string(j.at("outward").get<std::string>());
  p.lateral = lateral_from_string(j.value("lateral", std::string("NN")));
  p.modes = j.value("modes", 20);
}

void to_json(nlohmann::json& j, const Domain& d) {
  j = nlohmann::json{{"k", d.k()}, {"rects", d.rects()}, {"ports", d.ports()}, {"dirichlet", d.dirichlet()}};
}

void from_json(const nlohmann::json& j, Domain& d) {
  d = Domain(j.at("k").get<double>(), j.at("rects").get<std::vector<Rect>>(), j.at("ports").get<std::vector<Port>>(),
             j.value("dirichlet", std::vector<Segment>{}));
}

}  // namespace wavebranch
