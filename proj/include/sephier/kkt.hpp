#pragma once

// Stationarity conditions of  max f_0(x)  s.t.  f_1(x) = ||x||^2 - 1 = 0.
// At a constrained maximizer the gradients of f_0 and f_1 are parallel, i.e.
// every 2x2 minor
//     g_ij = d_i f_0 * d_j f_1 - d_j f_0 * d_i f_1,     d_k f_1 = 2 x_k,
// vanishes. Only i < j is stored; g_ji = -g_ij and g_ii = 0.

#include <span>
#include <vector>

#include "sephier/tensor_poly.hpp"

namespace sephier {

struct KktMinor {
  int i = 0;
  int j = 0;
  SparsePolynomial polynomial;
  SymmetricTensor gamma;  // contracts to polynomial
};

class KktSystem {
 public:
  KktSystem(SparsePolynomial objective, std::vector<KktMinor> minors);

  int num_vars() const { return objective_.num_vars(); }
  int half_degree() const { return objective_.degree() / 2; }
  const SparsePolynomial& objective() const { return objective_; }
  const SparsePolynomial& sphere() const { return sphere_; }
  const std::vector<KktMinor>& minors() const { return minors_; }

  /// g_ij for any ordered pair, using antisymmetry.
  SparsePolynomial minor(int i, int j) const;

 private:
  SparsePolynomial objective_;
  SparsePolynomial sphere_;
  std::vector<KktMinor> minors_;
};

/// Errors: NotHomogeneous, OddDegree, DimensionMismatch (num_vars disagrees
/// with f0).
KktSystem build_kkt_system(const SparsePolynomial& f0, int num_vars);
inline KktSystem build_kkt_system(const SparsePolynomial& f0) {
  return build_kkt_system(f0, f0.num_vars());
}

/// max(|f_1(x)|, max_ij |g_ij(x)|). Requires | ||x|| - 1 | <= 1e-8.
double kkt_residual(const KktSystem& sys, std::span<const double> x);

}  // namespace sephier
