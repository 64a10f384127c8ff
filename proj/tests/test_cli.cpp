#include <cstdio>
#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "run_config.hpp"

using namespace wavebranch;
using namespace wavebranch::cli;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& row) {
  std::vector<std::string> out;
  std::istringstream in(row);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("ranges") {
  CHECK(parse_range("2:10") == Range{2.0, 10.0, 0.0});
  CHECK(parse_range("1.5:2.5:0.01") == Range{1.5, 2.5, 0.01});
  CHECK(parse_range(format_range(Range{0.1, 0.7, 1e-3})) == Range{0.1, 0.7, 1e-3});
  CHECK_THROWS_AS(parse_range("3"), ValidationError);
  CHECK_THROWS_AS(parse_range("a:b"), ValidationError);
  CHECK_THROWS_AS(parse_range("1:2:3:4"), ValidationError);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.command = "design";
  c.target = "invisible";
  c.ell = 1.4;
  c.gamma = 2.5;
  c.L_window = {5.0, 10.0, 0.01};
  c.tol = 1e-3;
  c.joint_refine = true;
  c.threads = 4;
  c.h = 1.0 / 128;
  const auto path = std::filesystem::temp_directory_path() / "wavebranch_cfg_test.json";
  save_config(c, path.string());
  const RunConfig back = load_config(path.string());
  std::filesystem::remove(path);
  CHECK(back == c);

  // Missing keys fall back to defaults; windows may be strings.
  const RunConfig d = nlohmann::json::parse(R"({"command":"sweep","L_window":"2:3:0.5","k_pi":0.5})").get<RunConfig>();
  CHECK(d.command == "sweep");
  CHECK(d.L_window == Range{2.0, 3.0, 0.5});
  CHECK(d.k == doctest::Approx(0.5 * std::numbers::pi));
  CHECK(d.ell == 1.0);
  CHECK_THROWS_AS(load_config("/nonexistent/wavebranch.json"), ValidationError);
}

TEST_CASE("validation") {
  RunConfig c;
  c.command = "solve";
  CHECK_NOTHROW(validate(c));
  auto bad = [&](auto mutate) {
    RunConfig x = c;
    mutate(x);
    CHECK_THROWS_AS(validate(x), ValidationError);
  };
  bad([](RunConfig& x) { x.k = 4.0; });
  bad([](RunConfig& x) { x.L = 1.0; });
  bad([](RunConfig& x) { x.h = 0.0; });
  bad([](RunConfig& x) { x.modes = 0; });
  bad([](RunConfig& x) { x.backend = "cholesky"; });
  bad([](RunConfig& x) { x.half = "left"; });
  bad([](RunConfig& x) { x.command = "frobnicate"; });
  bad([](RunConfig& x) {
    x.command = "design";
    x.target = "zero";
  });
  bad([](RunConfig& x) {
    x.command = "asy";
    x.m = 1;
    x.n = 2;
  });
  CHECK(default_tol("zero-reflection") == 1e-3);
  CHECK(default_tol("zero-transmission") == 1e-2);
}

TEST_CASE("exit codes") {
  std::ostringstream out, log;
  RunConfig c;
  c.command = "solve";
  c.k = 4.0;
  CHECK(run(c, out, log) == kValidation);
  CHECK_FALSE(log.str().empty());

  RunConfig d;
  d.command = "design";
  d.target = "zero-reflection";
  d.L_window = {3.0, 3.1, 0.0};
  std::ostringstream o2, l2;
  CHECK(run(d, o2, l2) == kUnconverged);
  CHECK(l2.str().find("no bracket found") != std::string::npos);
}

TEST_CASE("solve records") {
  RunConfig c;
  c.command = "solve";
  c.L = 3.3649;
  std::ostringstream out, log;
  REQUIRE(run(c, out, log) == kOk);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.contains("R"));
  CHECK(j.contains("T"));
  CHECK(j.at("L") == 3.3649);
  const double absR = std::hypot(j.at("R")[0].get<double>(), j.at("R")[1].get<double>());
  CHECK(absR < 1e-3);

  c.half = "neumann";
  std::ostringstream o2;
  REQUIRE(run(c, o2, log) == kOk);
  const auto jh = nlohmann::json::parse(o2.str());
  CHECK(jh.contains("r"));
  CHECK_FALSE(jh.contains("R"));
}

TEST_CASE("sweep csv") {
  RunConfig c;
  c.command = "sweep";
  c.L_window = {3.0, 3.2, 0.1};
  std::ostringstream out, log;
  REQUIRE(run(c, out, log) == kOk);
  const auto rows = lines(out.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "L,ReR,ImR,ReT,ImT,absR,absT,energy_residual");

  // 17 significant digits: every field re-parses to a double that prints back identically.
  const auto f = split(rows[2]);
  for (const auto& field : f) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::stod(field));
    CHECK(field == buf);
  }
  BranchedGuideParams g = guide_params(c);
  g.L = std::stod(f[0]);
  const Coefficients direct = full_scattering(g, numerics(c));
  CHECK(std::abs(cplx(std::stod(f[1]), std::stod(f[2])) - direct.R) < 1e-10);
  CHECK(std::abs(cplx(std::stod(f[3]), std::stod(f[4])) - direct.T) < 1e-10);

  c.L_window = {3.2, 3.2, 0.1};
  std::ostringstream o2;
  REQUIRE(run(c, o2, log) == kOk);
  CHECK(lines(o2.str()).size() == 2);

  c.L_window = {3.3, 3.2, 0.1};
  std::ostringstream o3;
  REQUIRE(run(c, o3, log) == kOk);
  CHECK(lines(o3.str()).size() == 1);
}

TEST_CASE("smatrix and asy records") {
  RunConfig c;
  c.command = "smatrix";
  c.ell = 1.4;
  std::ostringstream out, log;
  REQUIRE(run(c, out, log) == kOk);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j.at("symplectic_residual").get<double>() < 1e-10);

  RunConfig a;
  a.command = "asy";
  a.m = 2;
  a.n = 1;
  a.samples = 11;
  std::ostringstream o2, l2;
  REQUIRE(run(a, o2, l2) == kOk);
  const auto rows = lines(o2.str());
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == "phase,ReS_R,ImS_R,ReS_T,ImS_T");
  const auto first = split(rows[1]), last = split(rows[11]);
  for (int i = 1; i < 5; ++i) CHECK(std::stod(first[i]) == doctest::Approx(std::stod(last[i])).epsilon(1e-12));
}
