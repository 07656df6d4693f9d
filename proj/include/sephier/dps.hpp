#pragma once

// Bipartite separability baseline: one-sided symmetric extensions
// rho~ on A (x) B_1 (x) ... (x) B_k with optional PPT cuts.
//
// Subsystem indices are big-endian base-n digits, position 0 = A,
// position j = B_j. A complex Hermitian N x N matrix H is carried as the
// real symmetric 2N x 2N block [[Re H, -Im H], [Im H, Re H]].

#include <vector>

#include <Eigen/Dense>

#include "sephier/relaxation.hpp"
#include "sephier/sdp.hpp"
#include "sephier/tensor_poly.hpp"

namespace sephier {

struct RealBlock {
  Eigen::MatrixXd matrix;
  double trace_factor = 2.0;  // Tr matrix = trace_factor * Tr H
};

/// Errors: NotHermitian.
RealBlock complex_to_real_block(const Eigen::MatrixXcd& h);

/// Inverse of the embedding, projecting a general real symmetric block
/// onto the complex structure first.
Eigen::MatrixXcd real_block_to_complex(const Eigen::MatrixXd& x);

/// Index with the digits at positions a and b exchanged.
int swap_subsystems(int index, int local_dim, int systems, int a, int b);

/// P_pi H P_pi^T for the subsystem transposition (a b).
Eigen::MatrixXcd permute_subsystems(const Eigen::MatrixXcd& h, int local_dim, int systems, int a, int b);

/// Partial transpose on the subsystems flagged in mask (size = systems).
Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& h, int local_dim, int systems,
                                   const std::vector<bool>& mask);

/// Average of P_pi H P_pi^T over all permutations of positions 1..systems-1.
Eigen::MatrixXcd twirl_b_systems(const Eigen::MatrixXcd& h, int local_dim, int systems);

/// Traces out the trailing `drop` subsystems.
Eigen::MatrixXcd partial_trace_tail(const Eigen::MatrixXcd& h, int local_dim, int systems, int drop);

struct DpsProgram {
  SdpProblem problem;
  int local_dim = 0;
  int extensions = 0;
  bool ppt = false;
  int joint_dim = 0;  // n^{k+1}
};

/// maximize Tr[(M (x) 1) rho~] over unit-trace PSD rho~ invariant under
/// B-permutations, PSD under the partial transposes of {B_1..B_j} when ppt.
/// Errors: ShapeMismatch unless M acts on two copies; SizeOverflow when the
/// real block side 2 n^{k+1} exceeds max_side.
DpsProgram build_dps_bipartite(const ComplexHermitianOperator& m, int extensions, bool ppt,
                               int max_side = default_max_moment_side());

struct DpsResult {
  double value = 0.0;  // primal Tr[M rho_AB1]
  double bound = 0.0;  // dual objective
  SdpStatus status = SdpStatus::NumericalFailure;
  Eigen::MatrixXcd rho_ab;
  SdpSolution raw;
};

DpsResult solve_dps(const ComplexHermitianOperator& m, int extensions, bool ppt,
                    const SolverOptions& options = hierarchy_solver_options());

}  // namespace sephier
