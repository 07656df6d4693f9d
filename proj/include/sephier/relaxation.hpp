#pragma once

// Level-r moment relaxation of  max f_0(x) s.t. ||x|| = 1  in monomial
// coordinates, with optional KKT moment constraints, and its SOS dual.
//
// The moment matrix rho is indexed by the degree-(d+r) monomials. A
// homogeneous polynomial p of degree 2(d+r) becomes a linear functional on
// rho by spreading each coefficient c_gamma evenly over the ordered pairs
// (beta1, beta2) with beta1 + beta2 = gamma. The Hankel equalities make the
// choice of spreading irrelevant on the feasible set.

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "sephier/sdp.hpp"
#include "sephier/tensor_poly.hpp"

namespace sephier {

/// SEPHIER_MAX_MOMENT_SIDE when set to a positive integer, otherwise 3000.
int default_max_moment_side();

struct HierarchyConfig {
  int num_vars = 0;
  int half_degree = 1;
  int level = 0;
  bool kkt_enabled = false;
  bool ppt_enabled = false;  // bipartite baseline only
  int max_moment_side = default_max_moment_side();

  /// monomial_count(num_vars, half_degree + level)
  std::uint64_t moment_side() const;
};

struct KktRowTag {
  int constraint = 0;
  MultiIndex alpha;  // degree 2r multiplier
  int i = 0;
  int j = 0;
};

struct MomentProgram {
  HierarchyConfig config;
  SdpProblem problem;
  std::vector<MultiIndex> basis;  // degree d + r, descending grlex
  int normalization_row = 0;
  std::vector<KktRowTag> kkt_rows;
  SparsePolynomial objective;  // f_0
};

/// Gram-spread functional of a homogeneous polynomial of degree
/// 2 * basis degree, acting on block `block`.
SparseBlockMatrix gram_functional(const SparsePolynomial& p, const std::vector<MultiIndex>& basis,
                                  int block = 0);

/// m^T Q m for the given monomial vector m.
SparsePolynomial gram_polynomial(const Eigen::MatrixXd& q, const std::vector<MultiIndex>& basis);

/// Errors: SizeOverflow when the moment side exceeds cfg.max_moment_side,
/// ShapeMismatch when the tensor disagrees with cfg.
MomentProgram build_moment_sdp(const SymmetricTensor& m, const HierarchyConfig& cfg);

struct MomentSolution {
  Eigen::MatrixXd rho;
  double objective = 0.0;  // primal <C, rho>
  double bound = 0.0;      // dual objective, the certified upper bound
  SdpStatus status = SdpStatus::NumericalFailure;
  SdpResiduals residuals;
  SdpSolution raw;
};

/// Tolerances used by the hierarchy: the defaults, plus tighter targets so
/// comparisons between levels are not dominated by solver noise.
SolverOptions hierarchy_solver_options();

MomentSolution solve_moment(const MomentProgram& program,
                            const SolverOptions& options = hierarchy_solver_options());

struct SosCertificate {
  double nu = 0.0;
  int num_vars = 0;
  int half_degree = 0;
  int level = 0;
  std::vector<MultiIndex> monomials;
  Eigen::MatrixXd gram;
  struct Multiplier {
    int i = 0;
    int j = 0;
    SparsePolynomial chi;  // homogeneous degree 2r
  };
  std::vector<Multiplier> chi;
};

/// nu = dual objective, Q = sum y_i A_i - C (the dual slack rebuilt from y
/// so the polynomial identity holds to rounding), chi_ij = -sum_alpha
/// y_(alpha,ij) x^alpha. Throws DualInfeasible unless the solve is Optimal.
SosCertificate extract_certificate(const MomentProgram& program, const SdpSolution& solution);

/// Max absolute coefficient of
///   nu ||x||^{2(d+r)} - f_0 ||x||^{2r} - sum chi_ij g_ij - m^T Q m.
/// Pure polynomial arithmetic. Throws ShapeMismatch on inconsistent sizes.
double verify_certificate(const SymmetricTensor& m, const SosCertificate& cert);

double min_gram_eigenvalue(const SosCertificate& cert);

nlohmann::json certificate_to_json(const SosCertificate& cert);
SosCertificate certificate_from_json(const nlohmann::json& doc);

struct HierarchyResult {
  MomentProgram program;
  MomentSolution solution;
  std::optional<SosCertificate> certificate;  // present when Optimal
};

HierarchyResult solve_hierarchy(const SymmetricTensor& m, const HierarchyConfig& cfg,
                                const SolverOptions& options = hierarchy_solver_options());

}  // namespace sephier
