#pragma once

// Rectilinear waveguide domains: unions of axis-aligned rectangles with
// Neumann walls, optional Dirichlet symmetry cuts and modal ports.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace wavebranch {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryCondition { Neumann, Dirichlet };

/// Lateral boundary conditions of a duct cross-section. For DN the
/// Dirichlet side sits at the first endpoint of the port cut.
enum class LateralBc { NN, DN };

enum class Axis { PlusX, MinusX, PlusY, MinusY };

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;

  Rect() = default;
  Rect(double x0_, double x1_, double y0_, double y1_);

  [[nodiscard]] bool contains(double x, double y) const {
    return x > x0 && x < x1 && y > y0 && y < y1;
  }
  [[nodiscard]] bool operator==(const Rect&) const = default;
};

/// Axis-aligned segment; `a` and `b` differ in exactly one coordinate.
struct Segment {
  Point a, b;
  [[nodiscard]] bool vertical() const { return a.x == b.x; }
  [[nodiscard]] double length() const;
  [[nodiscard]] bool operator==(const Segment&) const = default;
};

/// A transparent (radiating) boundary: a cut across a duct whose exterior is
/// a semi-infinite straight duct represented by its modal DtN map.
struct Port {
  std::string name;
  Segment cut;
  Axis outward = Axis::MinusX;
  LateralBc lateral = LateralBc::NN;
  int modes = 20;  // truncation count M

  [[nodiscard]] double width() const { return cut.length(); }
  /// Coordinate of the cut along the outward axis (e.g. -x for a left port).
  [[nodiscard]] double outward_coordinate() const;
  [[nodiscard]] bool operator==(const Port&) const = default;
};

class Domain {
 public:
  Domain() = default;
  Domain(double k, std::vector<Rect> rects, std::vector<Port> ports,
         std::vector<Segment> dirichlet = {});

  [[nodiscard]] double k() const { return k_; }
  [[nodiscard]] const std::vector<Rect>& rects() const { return rects_; }
  [[nodiscard]] const std::vector<Port>& ports() const { return ports_; }
  [[nodiscard]] const std::vector<Segment>& dirichlet() const { return dirichlet_; }

  [[nodiscard]] const Port& port(const std::string& name) const;
  [[nodiscard]] std::optional<std::size_t> port_index(const std::string& name) const;

  /// Open-set membership of the union of rectangles.
  [[nodiscard]] bool contains(double x, double y) const;
  /// Membership of the closure (boundary points included).
  [[nodiscard]] bool contains_closed(double x, double y) const;

  /// Tag of a boundary point: Dirichlet if it lies on a Dirichlet segment.
  [[nodiscard]] BoundaryCondition boundary_tag(double x, double y) const;

  /// Exact mirror-symmetry test x -> -x of the rectangle union.
  [[nodiscard]] bool mirror_symmetric() const;

  /// Sorted distinct x (resp. y) coordinates of every rectangle edge.
  [[nodiscard]] std::vector<double> x_breaks() const;
  [[nodiscard]] std::vector<double> y_breaks() const;

  /// Throws GeometryError when an invariant is violated.
  void validate() const;

  [[nodiscard]] bool operator==(const Domain&) const = default;

 private:
  double k_ = 0.0;
  std::vector<Rect> rects_;
  std::vector<Port> ports_;
  std::vector<Segment> dirichlet_;
};

/// Side branch pair placed symmetrically at x = ±offset.
struct ExtraBranch {
  double offset = 1.5;  // ϑ
  double width = 1.0;
  double height = 2.0;  // γ
};

struct BranchedGuideParams {
  double ell = 1.0;   // central branch width
  double L = 3.0;     // central branch top
  double k = 0.0;
  double xmax = 8.0;  // lead truncation abscissa
  int modes = 20;     // DtN truncation at the lead ports
  std::vector<ExtraBranch> extra;
};

/// Ω_L (or Ω_L^γ with side branches): horizontal unit strip truncated at
/// ±xmax with two NN ports, plus the central branch of width ℓ up to y = L.
Domain build_branched_guide(const BranchedGuideParams& p);

/// Left half x <= 0 of a symmetric domain; the cut x = 0 is tagged `bc`.
Domain half_domain(const Domain& d, BoundaryCondition bc);

/// Replace the top wall of the branch touching x = 0 by a radiating port at
/// y = y_cut (the branch is shortened or extended as needed).
Domain truncate_semi_infinite(const Domain& d, double y_cut);

// Structured-text (JSON) serialization.
void to_json(nlohmann::json& j, const Rect& r);
void from_json(const nlohmann::json& j, Rect& r);
void to_json(nlohmann::json& j, const Segment& s);
void from_json(const nlohmann::json& j, Segment& s);
void to_json(nlohmann::json& j, const Port& p);
void from_json(const nlohmann::json& j, Port& p);
void to_json(nlohmann::json& j, const Domain& d);
void from_json(const nlohmann::json& j, Domain& d);

std::string to_string(Axis a);
std::string to_string(LateralBc bc);
std::string to_string(BoundaryCondition bc);
Axis axis_from_string(const std::string& s);
LateralBc lateral_from_string(const std::string& s);
BoundaryCondition bc_from_string(const std::string& s);

}  // namespace wavebranch
