#pragma once

// Finite-volume discretization of Δu + k²u = 0 on rectilinear domains with
// Neumann walls, Dirichlet symmetry cuts and exact discrete modal ports.

#include <complex>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "wavebranch/geometry.hpp"
#include "wavebranch/modes.hpp"

namespace wavebranch {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
using VecC = Eigen::VectorXcd;

/// Fitted: each breakpoint interval gets round(len/h) equal cells.
/// Strict: every breakpoint interval must be an integer multiple of h.
enum class GridPolicy { Fitted, Strict };

/// Uniform closed ducts (terminal branches ending in a wall) can be replaced
/// by their exact discrete modal impedance, which keeps the branch length a
/// continuous parameter. Auto reduces only ducts whose length is not a
/// multiple of h.
enum class ClosurePolicy { Always, Auto, Never };

enum class LinearBackend { SparseLU, UmfPack };

struct Numerics {
  double h = 1.0 / 64;
  GridPolicy grid = GridPolicy::Fitted;
  ClosurePolicy closure = ClosurePolicy::Always;
  bool reduce_leads = true;  // replace uniform port leads by their exact reduction
  LinearBackend backend = LinearBackend::UmfPack;
  double refine_tol = 1e-10;
  int refine_max = 4;
  bool estimate_condition = true;
  double condition_warn = 1e12;
};

/// W-orthonormal eigenbasis of the discrete transverse operator on a cut.
struct CutBasis {
  std::vector<int> unknowns;    // global unknown index of each cut node
  std::vector<double> coords;   // signed transverse coordinate from the cut origin
  Eigen::VectorXd weights;      // dual face lengths
  Eigen::MatrixXd phi;          // columns are modes, phiᵀ W phi = I
  Eigen::VectorXd mu;           // discrete transverse eigenvalues (≈ λ_n²)
};

/// A cut carrying a modal boundary block. Modes n < radiating are outgoing;
/// the remaining modes see a Neumann wall `depth` axial cells beyond the cut.
struct ModalCut {
  std::string name;          // port name, or "duct:<i>" for closed ducts
  Axis outward = Axis::MinusX;
  LateralBc lateral = LateralBc::NN;
  Segment cut;               // at its reduced position
  double position = 0.0;     // outward coordinate of the cut
  double ha = 0.0;           // axial spacing of the (virtual) exterior duct
  double depth = 0.0;        // exterior duct length in cells (0: cut is the port)
  int radiating = 0;
  std::optional<std::size_t> rect;  // source rectangle of a closed duct
  CutBasis basis;
  std::vector<cplx> theta;   // discrete axial phase per cell, Im θ ≥ 0

  [[nodiscard]] int size() const { return static_cast<int>(basis.unknowns.size()); }
  [[nodiscard]] bool is_port() const { return radiating > 0; }
  /// Boundary admittance of mode n, split as g = s / c to stay finite at resonance.
  void admittance(int n, double depth_cells, cplx& s, cplx& c) const;
  [[nodiscard]] cplx admittance(int n) const;
};

struct Mesh {
  std::vector<double> xs, ys;
  std::vector<int> index;       // (i, j) -> unknown, -1 if absent
  std::vector<int> node_i, node_j;
  std::vector<bool> dirichlet_node;  // per grid node
  std::vector<bool> active_cell;
  std::vector<ModalCut> cuts;
  double k = 0.0;

  [[nodiscard]] int nx() const { return static_cast<int>(xs.size()); }
  [[nodiscard]] int ny() const { return static_cast<int>(ys.size()); }
  [[nodiscard]] int unknowns() const { return static_cast<int>(node_i.size()); }
  [[nodiscard]] int at(int i, int j) const { return index[static_cast<std::size_t>(i * ny() + j)]; }
  [[nodiscard]] const ModalCut& cut(const std::string& name) const;
  [[nodiscard]] std::optional<std::size_t> cut_index(const std::string& name) const;
};

/// Build the grid, the node numbering and the modal cuts. When
/// `ducts_at_junction` is set every closed duct is cut at its junction row.
Mesh build_mesh(const Domain& d, const Numerics& num, bool ducts_at_junction = false);

class LinearSolver {
 public:
  virtual ~LinearSolver() = default;
  virtual VecC solve(const VecC& b) const = 0;
  [[nodiscard]] Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;
};

std::unique_ptr<LinearSolver> factorize(const SpMat& a, LinearBackend backend);

/// Hager-Higham estimate of the 1-norm condition number.
double condition_estimate(const SpMat& a, const LinearSolver& lu);

struct DiscreteSystem {
  std::shared_ptr<const Mesh> mesh;
  SpMat matrix;  // complex symmetric
  Numerics numerics;
  std::shared_ptr<const LinearSolver> lu;
  double condition = 0.0;

  /// Right-hand side for a unit-amplitude incident mode.
  [[nodiscard]] VecC rhs(const std::string& port, int mode) const;
  /// Trace amplitude of the unit incident mode at the cut.
  [[nodiscard]] cplx incident_trace(const std::string& port, int mode) const;
};

/// Trace amplitude at the cut of the unit flux-normalized incident mode.
cplx incident_trace(const Mesh& mesh, const std::string& port, int mode);
/// Right-hand side that injects the unit incident mode through a port.
VecC incident_rhs(const Mesh& mesh, const std::string& port, int mode);

/// Assemble the matrix (optionally skipping closed-duct blocks) and factorize it.
DiscreteSystem assemble(const Domain& d, const Numerics& num);
SpMat assemble_matrix(const Mesh& mesh, bool include_closed_ducts = true);

struct PortAmplitudes {
  std::string port;
  std::vector<cplx> outgoing;  // flux-normalized, one per truncated mode
  std::vector<cplx> incoming;
};

struct FieldSolution {
  std::shared_ptr<const Mesh> mesh;
  VecC values;
  std::vector<PortAmplitudes> ports;
  std::string incident_port;
  int incident_mode = 0;
  double condition = 0.0;
  double residual = 0.0;
  std::vector<std::string> warnings;
};

/// Total field for a unit incident mode; amplitudes are extracted at every port.
FieldSolution solve_with_incidence(const DiscreteSystem& sys, const std::string& port, int mode);

/// Outgoing flux-normalized amplitude of mode n at a port.
cplx extract_amplitude(const FieldSolution& sol, const std::string& port, int n);

/// Fill the amplitude table from a nodal solution.
void extract_all(FieldSolution& sol);

/// Field table x, y, Re, Im ordered by rows of constant y, including the
/// modally reconstructed reduced ducts.
void export_field(const FieldSolution& sol, std::ostream& out);

std::string to_string(LinearBackend b);
LinearBackend backend_from_string(const std::string& s);
std::string to_string(ClosurePolicy c);
ClosurePolicy closure_from_string(const std::string& s);
std::string to_string(GridPolicy g);
GridPolicy grid_from_string(const std::string& s);

}  // namespace wavebranch
