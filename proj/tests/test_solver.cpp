#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wavebranch/scattering.hpp"
#include "wavebranch/solver.hpp"

using namespace wavebranch;

namespace {

const double k08 = 0.8 * std::numbers::pi;

Domain straight(double half_length) {
  Port left, right;
  left.name = "left";
  left.cut = {{-half_length, 0}, {-half_length, 1}};
  left.outward = Axis::MinusX;
  right.name = "right";
  right.cut = {{half_length, 0}, {half_length, 1}};
  right.outward = Axis::PlusX;
  return Domain(k08, {Rect(-half_length, half_length, 0, 1)}, {left, right});
}

BranchedGuideParams guide(double ell, double L) {
  BranchedGuideParams g;
  g.ell = ell;
  g.L = L;
  g.k = k08;
  return g;
}

std::pair<cplx, cplx> RT(const BranchedGuideParams& g, const Numerics& num) {
  const Coefficients c = full_scattering(g, num);
  return {c.R, c.T};
}

}  // namespace

TEST_CASE("straight guide is transparent") {
  for (bool reduce : {true, false}) {
    Numerics num;
    num.reduce_leads = reduce;
    const auto sys = assemble(straight(2.0), num);
    const auto sol = solve_with_incidence(sys, "left", 0);
    CHECK(std::abs(extract_amplitude(sol, "left", 0)) < 1e-10);
    // Global phase convention: the transmitted wave continues e^{ikx} unchanged.
    CHECK(std::abs(extract_amplitude(sol, "right", 0) - 1.0) < 1e-10);
    CHECK(sol.residual < 1e-12);
  }
}

TEST_CASE("backends agree") {
  Numerics a, b;
  b.backend = LinearBackend::SparseLU;
  const auto [Ra, Ta] = RT(guide(1.0, 3.3), a);
  const auto [Rb, Tb] = RT(guide(1.0, 3.3), b);
  CHECK(std::abs(Ra - Rb) < 1e-11);
  CHECK(std::abs(Ta - Tb) < 1e-11);
}

TEST_CASE("lead reduction is exact") {
  Numerics reduced, meshed;
  meshed.reduce_leads = false;
  for (double L : {2.7, 3.3649}) {
    const auto [R1, T1] = RT(guide(1.4, L), reduced);
    const auto [R2, T2] = RT(guide(1.4, L), meshed);
    CHECK(std::abs(R1 - R2) < 1e-9);
    CHECK(std::abs(T1 - T2) < 1e-9);
  }
}

TEST_CASE("modal branch closure matches the meshed branch") {
  // L = 215/64 is grid-aligned, so the fully meshed branch is the same discrete problem.
  const double L = 215.0 / 64.0;
  Numerics closed, meshed;
  meshed.closure = ClosurePolicy::Never;
  meshed.reduce_leads = false;
  const auto [R1, T1] = RT(guide(1.0, L), closed);
  const auto [R2, T2] = RT(guide(1.0, L), meshed);
  CHECK(std::abs(R1 - R2) < 1e-9);
  CHECK(std::abs(T1 - T2) < 1e-9);
}

TEST_CASE("DtN truncation count is converged at M = 20") {
  auto g20 = guide(1.4, 3.1);
  auto g40 = g20;
  g40.modes = 40;
  const auto [R1, T1] = RT(g20, {});
  const auto [R2, T2] = RT(g40, {});
  CHECK(std::abs(R1 - R2) < 1e-10);
  CHECK(std::abs(T1 - T2) < 1e-10);
}

TEST_CASE("energy conservation on random geometries") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> Ld(2.0, 6.0);
  for (double ell : {0.7, 1.4, 2.0}) {
    const Coefficients c = full_scattering(guide(ell, Ld(rng)), {});
    CHECK(c.energy_residual < 1e-10);
    CHECK(c.condition > 1.0);
    CHECK(std::isfinite(c.condition));
  }
}

TEST_CASE("reciprocity and mirror symmetry") {
  const auto sys = assemble(build_branched_guide(guide(1.4, 3.7)), {});
  const auto from_left = solve_with_incidence(sys, "left", 0);
  const auto from_right = solve_with_incidence(sys, "right", 0);
  const cplx R = extract_amplitude(from_left, "left", 0), T = extract_amplitude(from_left, "right", 0);
  const cplx Rr = extract_amplitude(from_right, "right", 0), Tr = extract_amplitude(from_right, "left", 0);
  CHECK(std::abs(T - Tr) < 1e-11);
  CHECK(std::abs(R - Rr) < 1e-11);
}

TEST_CASE("convergence in h") {
  // Re-entrant corners cap the rate between h^{4/3} (ratio 2.52) and h² (ratio 4).
  auto at = [](double h) {
    Numerics num;
    num.h = h;
    return full_scattering(guide(1.0, 3.0), num).R;
  };
  const cplx r32 = at(1.0 / 32), r64 = at(1.0 / 64), r128 = at(1.0 / 128);
  const double ratio = std::abs(r32 - r64) / std::abs(r64 - r128);
  CHECK(ratio > 2.4);
  CHECK(ratio < 5.0);
}

TEST_CASE("strict grid policy rejects unaligned geometry") {
  Numerics num;
  num.grid = GridPolicy::Strict;
  CHECK_THROWS_WITH_AS(assemble(build_branched_guide(guide(1.4, 3.0)), num), doctest::Contains("not grid-aligned"),
                       GeometryError);
  CHECK_NOTHROW(assemble(build_branched_guide(guide(1.0, 3.0)), num));
}

TEST_CASE("field export") {
  const auto sys = assemble(build_branched_guide(guide(1.0, 2.5)), {});
  const auto sol = solve_with_incidence(sys, "left", 0);
  std::stringstream ss;
  export_field(sol, ss);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "x,y,re,im");
  double px = -1e9, py = -1e9, ymax = 0.0, xmin = 0.0;
  int rows = 0;
  bool ordered = true;
  while (std::getline(ss, line)) {
    double x, y, re, im;
    char c;
    std::istringstream ls(line);
    ls >> x >> c >> y >> c >> re >> c >> im;
    if (y < py || (y == py && x <= px)) ordered = false;
    px = x;
    py = y;
    ymax = std::max(ymax, y);
    xmin = std::min(xmin, x);
    ++rows;
  }
  CHECK(ordered);
  CHECK(rows > sys.mesh->unknowns());
  CHECK(ymax == doctest::Approx(2.5));   // reduced branch reconstructed to its top
  CHECK(xmin == doctest::Approx(-8.0));  // reduced leads reconstructed to the ports
}

TEST_CASE("string conversions") {
  CHECK(backend_from_string(to_string(LinearBackend::SparseLU)) == LinearBackend::SparseLU);
  CHECK(closure_from_string(to_string(ClosurePolicy::Auto)) == ClosurePolicy::Auto);
  CHECK(grid_from_string(to_string(GridPolicy::Strict)) == GridPolicy::Strict);
  CHECK_THROWS_AS(backend_from_string("cholesky"), SolverError);
}
