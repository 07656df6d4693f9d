#pragma once

// Entanglement witnesses: Z with Tr[Z rho'] >= 0 on the model set and
// Tr[Z rho] < 0 on a target state.

#include "sephier/relaxation.hpp"
#include "sephier/sdp.hpp"
#include "sephier/tensor_poly.hpp"

namespace sephier {

enum class WitnessOrigin { FromBound, FromSearch };

struct Witness {
  ComplexHermitianOperator z;
  WitnessOrigin origin = WitnessOrigin::FromBound;
  int validity_level = 0;
  double margin = 0.0;  // lower bound on min Tr[Z rho'] over the model set
  bool valid = false;
};

/// Z = nu 1 - M. The margin is zero by construction when nu is a certified
/// upper bound at `level`.
Witness witness_from_bound(const ComplexHermitianOperator& m, double nu, int level = 0);

/// Level-r lower bound on min Tr[Z rho'] over product-symmetric states,
/// i.e. minus the hierarchy upper bound for -Z. Errors: SolverFailure.
double validate_witness(const ComplexHermitianOperator& z, int level, bool kkt,
                        const SolverOptions& options = hierarchy_solver_options());

struct WitnessSearchResult {
  Witness witness;
  double value = 0.0;  // Tr[Z rho_target], with Tr Z = dim
  bool detected = false;
  SdpStatus status = SdpStatus::NumericalFailure;
};

constexpr double kDetectionThreshold = -1e-6;

/// Minimizes Tr[Z rho_target] over Tr Z = dim and Z in the dual cone of
/// the k-extendible (optionally PPT) states with k = level, then validates
/// the witness at the same level. Errors: InvalidInput for a target that is
/// not a unit-trace PSD operator on n (x) n, SolverFailure when the search
/// SDP does not converge.
WitnessSearchResult dps_witness_search(const ComplexHermitianOperator& rho_target, int level, bool ppt,
                                       const SolverOptions& options = hierarchy_solver_options());

}  // namespace sephier
