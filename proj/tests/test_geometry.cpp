#include <numbers>

#include "doctest.h"
#include "wavebranch/geometry.hpp"

using namespace wavebranch;

namespace {

const double k08 = 0.8 * std::numbers::pi;

BranchedGuideParams params(double ell = 1.0, double L = 3.0) {
  BranchedGuideParams p;
  p.ell = ell;
  p.L = L;
  p.k = k08;
  return p;
}

Port port(const std::string& name, Segment cut, Axis outward, LateralBc lat = LateralBc::NN) {
  Port p;
  p.name = name;
  p.cut = cut;
  p.outward = outward;
  p.lateral = lat;
  return p;
}

}  // namespace

TEST_CASE("branched guide layout") {
  const Domain d = build_branched_guide(params(1.0, 3.0));
  REQUIRE(d.rects().size() == 2);
  CHECK(d.rects()[0] == Rect(-8, 8, 0, 1));
  CHECK(d.rects()[1] == Rect(-0.5, 0.5, 1, 3));
  REQUIRE(d.ports().size() == 2);
  CHECK(d.port("left").outward == Axis::MinusX);
  CHECK(d.port("right").outward == Axis::PlusX);
  CHECK(d.port("left").width() == doctest::Approx(1.0));
  CHECK(d.mirror_symmetric());
  CHECK(d.contains(0.0, 2.0));
  CHECK_FALSE(d.contains(1.0, 2.0));
  CHECK(d.contains(0.0, 1.0));  // internal edge between strip and branch
  CHECK(d.contains_closed(0.5, 3.0));
  CHECK_FALSE(d.contains(0.5, 2.0));
}

TEST_CASE("side branches are mirrored") {
  auto p = params();
  p.extra = {ExtraBranch{1.5, 1.0, 2.5}};
  const Domain d = build_branched_guide(p);
  CHECK(d.rects().size() == 4);
  CHECK(d.mirror_symmetric());
  CHECK(d.contains(1.5, 2.0));
  CHECK(d.contains(-1.5, 2.0));
  CHECK_FALSE(d.contains(-1.5, 2.6));
}

TEST_CASE("invalid parameters are rejected") {
  auto p = params();
  p.k = std::numbers::pi;
  CHECK_THROWS_AS(build_branched_guide(p), GeometryError);
  p = params();
  p.L = 1.0;
  CHECK_THROWS_AS(build_branched_guide(p), GeometryError);
  p = params();
  p.ell = 0.0;
  CHECK_THROWS_AS(build_branched_guide(p), GeometryError);
  p = params();
  p.extra = {ExtraBranch{0.8, 1.0, 2.0}};  // overlaps the central branch
  CHECK_THROWS_WITH_AS(build_branched_guide(p), doctest::Contains("geometry conflict"), GeometryError);
  p = params();
  p.xmax = 0.4;
  CHECK_THROWS_AS(build_branched_guide(p), GeometryError);
  CHECK_THROWS_AS(Rect(0, 0, 0, 1), GeometryError);
}

TEST_CASE("domain validation") {
  const std::vector<Rect> strip{Rect(-2, 2, 0, 1)};
  const Port left = port("left", {{-2, 0}, {-2, 1}}, Axis::MinusX);
  const Port right = port("right", {{2, 0}, {2, 1}}, Axis::PlusX);
  CHECK_NOTHROW(Domain(k08, strip, {left, right}));
  CHECK_THROWS_AS(Domain(k08, strip, {left, left}), GeometryError);
  // Outward axis not normal to the cut.
  CHECK_THROWS_AS(Domain(k08, strip, {port("p", {{-2, 0}, {-2, 1}}, Axis::PlusY)}), GeometryError);
  // Cut with the domain on the wrong side.
  CHECK_THROWS_AS(Domain(k08, strip, {port("p", {{-2, 0}, {-2, 1}}, Axis::PlusX)}), GeometryError);
  // Disconnected rectangles.
  CHECK_THROWS_AS(Domain(k08, {Rect(-2, -1, 0, 1), Rect(1, 2, 0, 1)}, {}), GeometryError);
  // Dirichlet tags only on x = 0.
  CHECK_THROWS_AS(Domain(k08, strip, {}, {Segment{{1, 0}, {1, 1}}}), GeometryError);
}

TEST_CASE("half domains") {
  const Domain full = build_branched_guide(params(1.4, 4.0));
  const Domain hn = half_domain(full, BoundaryCondition::Neumann);
  CHECK(hn.dirichlet().empty());
  CHECK(hn.ports().size() == 1);
  CHECK(hn.port("left").outward == Axis::MinusX);
  for (const auto& r : hn.rects()) CHECK(r.x1 <= 0.0);
  const Domain hd = half_domain(full, BoundaryCondition::Dirichlet);
  CHECK_FALSE(hd.dirichlet().empty());
  for (const auto& s : hd.dirichlet()) {
    CHECK(s.a.x == 0.0);
    CHECK(s.b.x == 0.0);
  }
  CHECK(hd.boundary_tag(0.0, 2.0) == BoundaryCondition::Dirichlet);
  CHECK(hd.boundary_tag(-0.7, 2.0) == BoundaryCondition::Neumann);

  const Domain asym(k08, {Rect(-2, 2, 0, 1), Rect(0.2, 0.8, 1, 2)},
                    {port("left", {{-2, 0}, {-2, 1}}, Axis::MinusX), port("right", {{2, 0}, {2, 1}}, Axis::PlusX)});
  CHECK_FALSE(asym.mirror_symmetric());
  CHECK_THROWS_AS(half_domain(asym, BoundaryCondition::Neumann), GeometryError);
}

TEST_CASE("semi-infinite truncation adds a top port") {
  const Domain full = build_branched_guide(params(1.4, 4.0));
  const Domain tn = truncate_semi_infinite(half_domain(full, BoundaryCondition::Neumann), 9.0);
  const Port& tp = tn.port("top");
  CHECK(tp.outward == Axis::PlusY);
  CHECK(tp.lateral == LateralBc::NN);
  CHECK(tp.width() == doctest::Approx(0.7));
  CHECK(tp.cut.a.y == doctest::Approx(9.0));
  const Domain td = truncate_semi_infinite(half_domain(full, BoundaryCondition::Dirichlet), 9.0);
  const Port& tpd = td.port("top");
  CHECK(tpd.lateral == LateralBc::DN);
  CHECK(tpd.cut.a.x == 0.0);  // Dirichlet side first
  CHECK(td.boundary_tag(0.0, 8.5) == BoundaryCondition::Dirichlet);
  CHECK_THROWS_AS(truncate_semi_infinite(tn, 0.5), GeometryError);
}

TEST_CASE("json round trip") {
  auto p = params(1.4, 4.25);
  p.extra = {ExtraBranch{1.5, 1.0, 2.5}};
  const Domain d = half_domain(build_branched_guide(p), BoundaryCondition::Dirichlet);
  const nlohmann::json j = d;
  const Domain back = nlohmann::json::parse(j.dump()).get<Domain>();
  CHECK(back == d);
  for (Axis a : {Axis::PlusX, Axis::MinusX, Axis::PlusY, Axis::MinusY}) CHECK(axis_from_string(to_string(a)) == a);
  CHECK(bc_from_string("mixed") == BoundaryCondition::Dirichlet);
  CHECK(lateral_from_string(to_string(LateralBc::DN)) == LateralBc::DN);
  CHECK_THROWS_AS(axis_from_string("up"), GeometryError);
}
