#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace misosec::sdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ConeKind { PsdRealSymmetric, NonnegativeScalar };

struct ConeBlockSpec {
  ConeKind kind = ConeKind::PsdRealSymmetric;
  int dim = 1;
};

/// Symmetric matrix stored as its upper-triangular nonzeros (row <= col).
struct SparseSymmetric {
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;

  /// Keeps |value| > drop_tol entries of the upper triangle of a dense symmetric matrix.
  static SparseSymmetric from_dense(const Matrix& m, double drop_tol = 0.0);
  Matrix to_dense(int dim) const;
  /// <this, m> for symmetric dense m.
  double inner(const Matrix& m) const;
  /// acc += scale * this
  void add_to(Matrix& acc, double scale) const;
};

/// One conic constraint  F0 + sum_i x_i F_i  in the cone of `spec`.
struct ConeBlock {
  ConeBlockSpec spec;
  Matrix constant;                                     // F0
  std::vector<std::pair<int, SparseSymmetric>> terms;  // (variable index, F_i)
};

struct LinearEquality {
  Vector a;  // length num_vars
  double b = 0.0;
};

/// minimize c.x  subject to  F0_j + sum_i x_i F_ij >= 0 (per block),  A x = b.
/// The decision vector x is free.
struct SdpProblem {
  int num_vars = 0;
  Vector objective;
  std::vector<ConeBlock> blocks;
  std::vector<LinearEquality> equalities;

  /// Throws InvalidInput describing the first inconsistency.
  void validate() const;
  /// F0_j + sum_i x_i F_ij
  Matrix block_value(std::size_t j, const Vector& x) const;
  /// (sum_j <F_ij, Y_j>)_i
  Vector adjoint(const std::vector<Matrix>& y) const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasibleOrUnbounded, SlowProgress };

std::string to_string(SolveStatus s);

/// Farkas-type evidence that the LMI system is empty:
/// Y >= 0 with sum_j <F_ij, Y_j> + (A^T y)_i = 0 and b.y - sum_j <F0_j, Y_j> = 1.
struct InfeasibilityCertificate {
  std::vector<Matrix> dual_blocks;
  Vector equality_multipliers;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::SlowProgress;
  Vector x;
  std::vector<Matrix> block_values;  // slacks S_j = F0_j + sum x_i F_ij
  std::vector<Matrix> dual_values;   // Y_j
  Vector equality_duals;             // y
  double objective = 0.0;            // c.x
  double dual_objective = 0.0;       // b.y - sum <F0_j, Y_j>
  double duality_gap = 0.0;          // objective - dual_objective
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::optional<InfeasibilityCertificate> certificate;
  /// Improving ray for DualInfeasibleOrUnbounded: A d = 0, F(d) >= 0, c.d = -1.
  std::optional<Vector> unbounded_ray;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iterations = 200;
  double step_fraction = 0.98;
  bool verbose = false;
};

/// Infeasible-start primal-dual path following with Nesterov-Todd scaling and
/// Mehrotra predictor-corrector steps. Single threaded and deterministic.
/// Throws InvalidInput for ill-formed problems or tol outside [1e-10, 1e-4].
SdpSolution solve(const SdpProblem& problem, const SolverOptions& options);
SdpSolution solve(const SdpProblem& problem, double tol);

struct VerificationReport {
  std::vector<double> block_min_eigenvalues;  // of F0 + sum x_i F_i, recomputed
  std::vector<double> dual_min_eigenvalues;
  std::vector<double> complementarity;        // <S_j, Y_j> per block
  double max_equality_residual = 0.0;
  double dual_residual = 0.0;                 // ||c - A*(Y) - A^T y||_inf
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;                           // primal - dual objective
  bool certificate_present = false;
  bool certificate_valid = false;
  double certificate_violation = 0.0;  // b.y - sum <F0,Y> of the certificate
  double certificate_residual = 0.0;   // ||A*(Y) + A^T y||_inf of the certificate
  double certificate_min_eigenvalue = 0.0;

  double min_block_eigenvalue() const;
};

/// Recomputes every residual of `solution` against `problem` from scratch.
VerificationReport verify_solution(const SdpProblem& problem, const SdpSolution& solution);

/// Plain-text sparse triplet dump (see docs/sdp_dump_format.md).
void write_sparse_dump(const SdpProblem& problem, std::ostream& out);

}  // namespace misosec::sdp
