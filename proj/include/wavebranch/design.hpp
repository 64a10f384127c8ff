#pragma once

// Parameter searches for non-reflection, perfect reflection and invisibility.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wavebranch/asymptotics.hpp"
#include "wavebranch/scattering.hpp"

namespace wavebranch {

enum class Target { ZeroR, ZeroT, Invisible };

std::string to_string(Target t);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct DesignResult {
  Target target = Target::ZeroR;
  bool converged = false;
  double L = 0.0;
  std::optional<double> gamma;
  cplx R{}, T{};
  double objective = 0.0;  // |R|, |T| or |T − 1| from a fresh direct solve
  int iterations = 0;      // objective evaluations spent in refinement
  std::vector<double> seeds;
  // Invisibility only.
  std::optional<cplx> r, R_mix, R_inf;
  std::optional<bool> joint_improved;
  std::vector<std::string> diagnostics;
};

struct DesignOptions {
  Numerics num;
  double xmax = 8.0;
  int modes = 20;
  int threads = 1;
  double step = 0.0;        // sweep step; 0 selects π/(50k)
  double rel_tol = 1e-7;    // relative parameter tolerance of the refinement
  bool seed = true;         // attach asymptotic seeds when the model is available
};

struct DesignSearch {
  std::vector<DesignResult> roots;  // strictly increasing L
  std::vector<std::string> diagnostics;
};

/// Zeros of R(L) in the window, at most `count` (all when count <= 0).
DesignSearch find_zero_reflection(double ell, double k, Window L_window, int count, double tol,
                                  const DesignOptions& opt = {});
/// Zeros of T(L) in the window.
DesignSearch find_zero_transmission(double ell, double k, Window L_window, int count, double tol,
                                    const DesignOptions& opt = {});

struct InvisibilityOptions {
  double theta = 1.5;         // side branch centre
  double side_width = 1.0;
  double y_cut = 9.0;         // truncation of the semi-infinite central branch in stage 1
  double slope_tol = 0.05;    // stage 1 keeps roots whose |d arg R_∞/dγ| is within this fraction of the long-stub slope
  double limit_tol = 1e-8;    // stage 2 keeps roots with |R_mix(L) − R_∞| below this
  bool joint_refine = false;
};

struct StageOneCandidate {
  double gamma = 0.0;
  cplx R_inf{};
  double slope = 0.0;  // |d arg R_∞ / dγ|
};

struct StageTwoCandidate {
  double L = 0.0;
  cplx r{}, R_mix{};
  double tail = 0.0;  // |R_mix(L) − R_∞|
};

/// Stage 1: all γ in the window with R_∞(γ) = −1, by phase root finding.
std::vector<StageOneCandidate> invisibility_stage_one(double ell, double k, Window gamma_window,
                                                      const InvisibilityOptions& inv, const DesignOptions& opt,
                                                      std::vector<std::string>* diagnostics = nullptr);
/// Stage 2: all L in the window with r(L) = 1 at fixed γ.
std::vector<StageTwoCandidate> invisibility_stage_two(double ell, double k, double gamma, cplx R_inf,
                                                      Window L_window, const InvisibilityOptions& inv,
                                                      const DesignOptions& opt);

DesignResult find_invisibility(double ell, double k, Window gamma_window, Window L_window, double tol,
                               const InvisibilityOptions& inv = {}, const DesignOptions& opt = {});

/// Closed-form seeds: L in the window with r_asy(L) = target_r, one per period π/k.
std::vector<double> seed_from_asymptotics(const AsymptoticModel& model, cplx target_r, Window L_window,
                                          std::string* diagnostic = nullptr);

/// Seeds for the zero-reflection (target_r = −R_∞) or zero-transmission (target_r = R_∞) sequences.
std::vector<double> seed_from_asymptotics(const AsymptoticModel& model, Target target, Window L_window,
                                          std::string* diagnostic = nullptr);

void to_json(nlohmann::json& j, const DesignResult& r);

}  // namespace wavebranch
