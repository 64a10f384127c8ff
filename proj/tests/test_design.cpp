#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wavebranch/design.hpp"

using namespace wavebranch;
using std::numbers::pi;

namespace {

const double k08 = 0.8 * pi;

}  // namespace

TEST_CASE("closed-form seeds on a synthetic model") {
  // r_∞ = 0, t° = 1, r° = 0: r_asy(L) = e^{2ikL}, so r_asy = −1 at L = (π/2 + jπ)/k.
  AsymptoticModel m;
  m.k = k08;
  m.tc_inf = m.t_inf = 1.0;
  const auto seeds = seed_from_asymptotics(m, cplx(-1.0, 0.0), {1.0, 6.0});
  REQUIRE(seeds.size() >= 3);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    CHECK(std::abs(r_asy(seeds[i], m) + 1.0) < 1e-12);
    CHECK(seeds[i] > 1.0);
    CHECK(seeds[i] <= 6.0);
    if (i) CHECK(seeds[i] - seeds[i - 1] == doctest::Approx(pi / k08));
  }
  CHECK(std::fmod(seeds[0] * k08 - pi / 2, pi) == doctest::Approx(0.0).epsilon(1e-12));

  std::string diag;
  CHECK(seed_from_asymptotics(m, cplx(0.5, 0.0), {1.0, 6.0}, &diag).empty());
  CHECK(diag.find("off the asymptotic circle") != std::string::npos);

  AsymptoticModel two = m;
  two.mixed_scalar = false;
  CHECK_THROWS_AS(seed_from_asymptotics(two, Target::ZeroR, {2.0, 3.0}), RegimeError);
  CHECK_THROWS_AS(seed_from_asymptotics(m, Target::Invisible, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("zero reflection at ell = 1") {
  const DesignSearch s = find_zero_reflection(1.0, k08, {3.0, 4.0}, 0, 1e-3);
  REQUIRE(s.roots.size() == 1);
  const DesignResult& r = s.roots[0];
  CHECK(r.converged);
  CHECK(r.target == Target::ZeroR);
  CHECK(r.L == doctest::Approx(3.3649).epsilon(5e-3));
  CHECK(std::abs(r.R) < 1e-3);
  CHECK(std::abs(std::abs(r.T) - 1.0) < 1e-3);
  REQUIRE(r.seeds.size() == 1);
  CHECK(std::abs(r.seeds[0] - r.L) < 0.05);

  // The reported values are a fresh solve at the reported L.
  BranchedGuideParams g;
  g.ell = 1.0;
  g.L = r.L;
  g.k = k08;
  const Coefficients c = full_scattering(g, {});
  CHECK(std::abs(c.R - r.R) < 1e-12);
  CHECK(std::abs(c.T - r.T) < 1e-12);

  const nlohmann::json j = r;
  CHECK(j.at("target") == "zero-reflection");
  CHECK(j.at("converged") == true);
}

TEST_CASE("zero transmission at ell = 1") {
  const DesignSearch s = find_zero_transmission(1.0, k08, {3.5, 4.2}, 0, 1e-2);
  REQUIRE(s.roots.size() == 1);
  CHECK(s.roots[0].converged);
  CHECK(s.roots[0].L == doctest::Approx(3.85962).epsilon(5e-3));
  CHECK(std::abs(s.roots[0].T) < 1e-2);
}

TEST_CASE("search is deterministic") {
  DesignOptions a, b;
  b.threads = 3;
  const DesignSearch s1 = find_zero_reflection(1.0, k08, {3.0, 4.0}, 0, 1e-3, a);
  const DesignSearch s2 = find_zero_reflection(1.0, k08, {3.0, 4.0}, 0, 1e-3, b);
  REQUIRE(s1.roots.size() == s2.roots.size());
  CHECK(s1.roots[0].L == s2.roots[0].L);
}

TEST_CASE("zero reflection and zero transmission roots interlace") {
  const DesignSearch zr = find_zero_reflection(1.0, k08, {3.0, 7.0}, 0, 1e-3);
  const DesignSearch zt = find_zero_transmission(1.0, k08, {3.0, 7.0}, 0, 1e-2);
  REQUIRE(zr.roots.size() >= 3);
  REQUIRE(zt.roots.size() >= 3);
  std::vector<std::pair<double, int>> all;
  for (const auto& r : zr.roots) all.emplace_back(r.L, 0);
  for (const auto& r : zt.roots) all.emplace_back(r.L, 1);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].second != all[i - 1].second);
  for (std::size_t i = 1; i < zr.roots.size(); ++i) CHECK(zr.roots[i].L > zr.roots[i - 1].L);
}

TEST_CASE("count limits the number of roots") {
  const DesignSearch s = find_zero_reflection(1.0, k08, {3.0, 7.0}, 2, 1e-3);
  CHECK(s.roots.size() == 2);
}

TEST_CASE("empty bracket reports a diagnostic") {
  const DesignSearch s = find_zero_reflection(1.0, k08, {3.0, 3.1}, 0, 1e-3);
  CHECK(s.roots.empty());
  REQUIRE_FALSE(s.diagnostics.empty());
  CHECK(std::any_of(s.diagnostics.begin(), s.diagnostics.end(),
                    [](const std::string& d) { return d.find("no bracket found") != std::string::npos; }));
}

TEST_CASE("invalid design inputs") {
  CHECK_THROWS_AS(find_zero_reflection(1.0, k08, {0.5, 3.0}, 0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(find_zero_reflection(1.0, k08, {3.0, 2.0}, 0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(find_zero_reflection(1.0, k08, {3.0, 4.0}, 0, 0.0), std::invalid_argument);
  InvisibilityOptions inv;
  inv.theta = 0.9;  // side branch would overlap the central branch
  CHECK_THROWS_AS(find_invisibility(1.0, k08, {2.0, 3.0}, {6.0, 7.0}, 1e-2, inv), std::invalid_argument);
  CHECK_THROWS_AS(find_invisibility(1.3, k08, {2.0, 3.0}, {6.0, 7.0}, 1e-2), std::invalid_argument);
}

TEST_CASE("invisibility stages on narrow windows") {
  const InvisibilityOptions inv;
  const DesignOptions opt;
  const auto one = invisibility_stage_one(1.0, k08, {2.3, 2.7}, inv, opt);
  REQUIRE(one.size() == 1);
  CHECK(one[0].gamma == doctest::Approx(2.4959).epsilon(1e-3));
  CHECK(std::abs(one[0].R_inf + 1.0) < 1e-6);

  const auto two = invisibility_stage_two(1.0, k08, one[0].gamma, one[0].R_inf, {6.2, 6.6}, inv, opt);
  REQUIRE(two.size() == 1);
  CHECK(std::abs(two[0].r - 1.0) < 1e-6);
  CHECK(two[0].tail < inv.limit_tol);

  const double tol = 1e-2;
  const DesignResult res = find_invisibility(1.0, k08, {2.3, 2.7}, {6.2, 6.6}, tol, inv, opt);
  CHECK(res.converged);
  REQUIRE(res.gamma);
  CHECK(*res.gamma == doctest::Approx(2.4959).epsilon(1e-3));
  CHECK(res.L == doctest::Approx(6.384936).epsilon(2e-3));
  // Recombination: T = 1 and R = 0 need r = 1 and R_mix = −1.
  REQUIRE(res.r);
  REQUIRE(res.R_mix);
  CHECK(std::abs(*res.r - 1.0) < 2 * tol);
  CHECK(std::abs(*res.R_mix + 1.0) < 2 * tol);
  CHECK(std::abs(res.T - 1.0) < tol);
  CHECK(std::abs(res.R) < tol);
  CHECK(std::abs(res.objective - std::abs(res.T - 1.0)) < 1e-15);
}
