#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wavebranch/geometry.hpp"
#include "wavebranch/solver.hpp"

namespace wavebranch {

enum class Problem { Full, HalfNeumann, HalfDirichlet };

struct Coefficients {
  Problem problem = Problem::Full;
  cplx R{}, T{};     // full guide
  cplx r{};          // Neumann half-guide
  cplx R_mix{};      // Dirichlet half-guide
  double energy_residual = 0.0;
  double condition = 0.0;
  int unknowns = 0;
  std::vector<std::string> warnings;
};

Coefficients full_scattering(const BranchedGuideParams& g, const Numerics& num);
Coefficients half_scattering(const BranchedGuideParams& g, BoundaryCondition cut, const Numerics& num);

/// (r, R_mix) -> (R, T) = ((r + R_mix)/2, (r − R_mix)/2).
std::pair<cplx, cplx> recombine(cplx r, cplx R_mix);
/// Inverse map (R, T) -> (r, R_mix) = (R + T, R − T).
std::pair<cplx, cplx> decompose(cplx R, cplx T);

/// Scattering matrix of a half-guide whose branch is semi-infinite. The
/// scalar form is used when the branch carries no propagating mode.
struct SMatrix {
  BoundaryCondition cut = BoundaryCondition::Neumann;
  bool scalar = false;
  cplx s00{}, s01{}, s10{}, s11{};  // [[r, t], [t°, r°]] or [[R, T], [T•, R•]]
  double unitarity_residual = 0.0;  // ‖S Sᴴ − I‖_F (or ||R| − 1| when scalar)
  double symmetry_residual = 0.0;   // |s01 − s10|
  std::vector<std::string> warnings;
  std::shared_ptr<const FieldSolution> horizontal;  // incidence from the lead
  std::shared_ptr<const FieldSolution> vertical;    // incidence from the branch, if propagating
};

struct LimitParams {
  double ell = 1.0;
  double k = 0.0;
  BoundaryCondition cut = BoundaryCondition::Neumann;
  double y_cut = 9.0;
  double xmax = 8.0;
  int modes = 20;
  std::vector<ExtraBranch> extra;
};

/// Truncated half-domain ω_∞ used for the limit problems.
Domain limit_domain(const LimitParams& p);
SMatrix limit_smatrix(const LimitParams& p, const Numerics& num);

/// Discrete symplectic form q(u, v) = Σ_cuts Σ_j w_j/h (u₀ v̄₁ − u₁ v̄₀), with
/// index 0 on a line `shift` cells inside each port cut and index 1 on the
/// next line inward. A conjugated second argument is requested with
/// `conjugate_v` (v → v̄ is again a solution since the interior is real).
cplx symplectic_form(const FieldSolution& u, const FieldSolution& v, bool conjugate_v = false, int shift = 0);

struct SymplecticReport {
  cplx q_hh{}, q_vv{}, q_hv{};  // q(u⁻,u⁻), q(u°,u°), q(u⁻,u°)
  cplx q_h_conj_v{};            // q(u⁻, conj u°)
  double residual = 0.0;        // max deviation from the identities
};

/// Checks q(u⁻,u⁻) = (−1 + |r|² + |t|²) i, q(u°,u°) = (−1 + |t°|² + |r°|²) i,
/// q(u⁻,u°) = (r t̄° + t r̄°) i and q(u⁻, conj u°) = t − t°.
SymplecticReport symplectic_check(const SMatrix& s, int shift = 0);

/// Repeated solves on one geometry whose closed terminal ducts change length.
/// The ducts are cut at their junction, the reduced matrix is factored once and
/// every duct-length change is a low-rank update applied with Woodbury's identity.
class ScanSystem {
 public:
  ScanSystem(const Domain& base, const Numerics& num);

  /// Names of the closed ducts (in the order expected by solve()).
  [[nodiscard]] const std::vector<std::string>& ducts() const { return duct_names_; }
  /// Rectangle index in the base domain of each closed duct.
  [[nodiscard]] const std::vector<std::size_t>& duct_rects() const { return duct_rects_; }
  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }

  /// Solve with each closed duct ending at the given top coordinate.
  [[nodiscard]] FieldSolution solve(const std::vector<double>& tops, const std::string& port, int mode = 0) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  Numerics num_;
  SpMat a0_;
  std::unique_ptr<LinearSolver> lu_;
  std::vector<std::string> duct_names_;
  std::vector<std::size_t> duct_rects_;
  std::vector<std::size_t> duct_cut_;   // index into mesh cuts
  std::vector<double> duct_base_;       // junction coordinate
  std::vector<int> col_offset_;
  Eigen::MatrixXcd u_;  // W Φ per duct, stacked columns (rows: unknowns)
  Eigen::MatrixXcd x_;  // A0⁻¹ U
  Eigen::MatrixXcd c_;  // Uᵀ A0⁻¹ U
  std::vector<std::pair<std::string, int>> incidences_;
  std::vector<VecC> y_;  // A0⁻¹ f per incidence
};

/// Full-guide and half-guide coefficient evaluators on top of ScanSystem.
class GuideScanner {
 public:
  /// `problem` selects the full guide or one of the half-guides.
  GuideScanner(const BranchedGuideParams& g, Problem problem, const Numerics& num);
  /// Coefficient with the central branch top at L and side branches at gamma.
  [[nodiscard]] Coefficients evaluate(double L, double gamma = 0.0) const;
  [[nodiscard]] const ScanSystem& system() const { return *scan_; }

 private:
  BranchedGuideParams g_;
  Problem problem_;
  std::unique_ptr<ScanSystem> scan_;
  std::vector<int> role_;  // per duct: 0 central, 1 side
};

void to_json(nlohmann::json& j, const Coefficients& c);
void to_json(nlohmann::json& j, const SMatrix& s);
nlohmann::json complex_json(cplx z);
std::string to_string(Problem p);

}  // namespace wavebranch
