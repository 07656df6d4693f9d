#pragma once

// Block-diagonal semidefinite programs in standard form
//
//   primal:  min/max <C, X>   s.t.  <A_i, X> = b_i,  X >= 0
//   dual  (min sense):  max b'y  s.t.  S = C - sum y_i A_i >= 0
//   dual  (max sense):  min b'y  s.t.  S = sum y_i A_i - C >= 0
//
// and a dense infeasible-start primal-dual path-following solver.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sephier {

/// One upper-triangle entry (row <= col) of a symmetric block. An
/// off-diagonal value v stands for both (row, col) and (col, row), so it
/// contributes 2 v X(row, col) to <A, X>.
struct MatrixEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

using SparseBlockMatrix = std::vector<MatrixEntry>;
using BlockMatrix = std::vector<Eigen::MatrixXd>;

/// Sorts, merges duplicate positions, mirrors row > col entries and drops
/// zeros.
SparseBlockMatrix canonicalize(SparseBlockMatrix entries);

/// Adds coeff * X(row, col) to a linear functional (either triangle).
void add_functional_term(SparseBlockMatrix& entries, int block, int row, int col, double coeff);

/// Appends the upper triangle of a dense symmetric matrix.
void append_dense(SparseBlockMatrix& entries, int block, const Eigen::MatrixXd& m,
                  double drop_below = 0.0);

double inner_product(const SparseBlockMatrix& a, const BlockMatrix& x);
double inner_product(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix to_dense(const SparseBlockMatrix& a, const std::vector<int>& block_sizes);
double frobenius_norm(const SparseBlockMatrix& a);

enum class Sense { Minimize, Maximize };

struct SdpProblem {
  std::vector<int> block_sizes;
  SparseBlockMatrix objective;
  std::vector<SparseBlockMatrix> constraints;
  std::vector<double> rhs;
  Sense sense = Sense::Minimize;

  int num_constraints() const { return static_cast<int>(constraints.size()); }
  int add_constraint(SparseBlockMatrix a, double b);
  /// Throws ShapeMismatch on out-of-range entries or rhs/constraint count
  /// disagreement.
  void validate() const;
};

enum class SdpStatus {
  Optimal,
  MaxIterations,
  NumericalFailure,
  PrimalInfeasibleSuspected,
  DualInfeasibleSuspected,
};

std::string to_string(SdpStatus status);

struct SdpResiduals {
  double primal_infeasibility = 0.0;  // max_i |<A_i,X> - b_i| / (1 + |b_i|)
  double dual_infeasibility = 0.0;    // max |S - (C - sum y A)| entry / (1 + max |C|)
  double relative_gap = 0.0;          // |pobj - dobj| / (1 + |pobj| + |dobj|)
  double min_eig_x = 0.0;
  double min_eig_s = 0.0;
};

struct IterationLog {
  int iteration = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double complementarity = 0.0;  // <X, S>
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double primal_step = 0.0;
  double dual_step = 0.0;
};

struct SdpSolution {
  BlockMatrix x;
  Eigen::VectorXd y;
  BlockMatrix s;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  SdpStatus status = SdpStatus::NumericalFailure;
  int iterations = 0;
  SdpResiduals residuals;
  std::vector<IterationLog> trace;
};

struct SolverOptions {
  /// Optimal requires these.
  double feasibility_tolerance = 1e-7;
  double gap_tolerance = 1e-6;
  /// The solver keeps iterating toward these (tighter) targets while it
  /// makes progress. Values <= 0 mean "same as above".
  double target_feasibility = 1e-9;
  double target_gap = 1e-9;
  int max_iterations = 200;
  double step_fraction = 0.98;
  int verbosity = 0;
  bool presolve = true;
};

/// Residuals of (x, y, s) against `problem`, in the problem's own sense.
SdpResiduals compute_residuals(const SdpProblem& problem, const BlockMatrix& x,
                               const Eigen::VectorXd& y, const BlockMatrix& s);

struct PresolveReport {
  int removed_zero = 0;
  int removed_duplicate = 0;
  int removed_dependent = 0;
  std::vector<int> kept;           // original index of each reduced row
  std::vector<double> row_scale;   // reduced row = original row / row_scale
  double objective_scale = 1.0;    // reduced C = C / objective_scale
};

struct PresolveResult {
  SdpProblem problem;
  PresolveReport report;
};

/// Drops zero rows (InconsistentConstraints if b != 0), exact duplicates
/// (InconsistentConstraints on differing b) and linearly dependent rows,
/// then scales every row and the objective to unit Frobenius norm.
PresolveResult presolve(const SdpProblem& problem);

/// Maps a solution of the presolved problem back to `original`.
SdpSolution recover_solution(const SdpProblem& original, const PresolveReport& report,
                             const SdpSolution& reduced);

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

/// Plain-text block format:
///   sdp-text 1
///   sense min|max
///   blocks <count>
///   sizes <n_1> ... <n_k>
///   constraints <m>
///   rhs <b_1> ... <b_m>
///   <constraint> <block> <row> <col> <value>      (one per line)
/// Constraint 0 is the objective; constraint, block, row and col are
/// 1-based, entries are upper-triangle. Values print with 17 significant
/// digits so a write/read cycle is exact.
void write_sdp_text(std::ostream& out, const SdpProblem& problem);
SdpProblem read_sdp_text(std::istream& in);

}  // namespace sephier
