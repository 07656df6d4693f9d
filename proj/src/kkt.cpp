#include "sephier/kkt.hpp"

#include <cmath>

#include "sephier/error.hpp"

namespace sephier {

KktSystem::KktSystem(SparsePolynomial objective, std::vector<KktMinor> minors)
    : objective_(std::move(objective)),
      sphere_(SparsePolynomial::sphere_power(objective_.num_vars(), 1) -
              SparsePolynomial::constant(objective_.num_vars(), 1.0)),
      minors_(std::move(minors)) {}

SparsePolynomial KktSystem::minor(int i, int j) const {
  if (i == j) return SparsePolynomial(num_vars());
  const bool flip = i > j;
  const int a = flip ? j : i;
  const int b = flip ? i : j;
  for (const auto& m : minors_) {
    if (m.i == a && m.j == b) return flip ? -m.polynomial : m.polynomial;
  }
  throw Error(ErrorKind::DimensionMismatch, "minor index out of range");
}

KktSystem build_kkt_system(const SparsePolynomial& f0, int num_vars) {
  if (f0.num_vars() != num_vars) {
    throw Error(ErrorKind::DimensionMismatch, "objective variable count differs from num_vars");
  }
  if (f0.is_zero()) throw Error(ErrorKind::NotHomogeneous, "objective is the zero polynomial");
  if (!f0.is_homogeneous()) throw Error(ErrorKind::NotHomogeneous, "objective is not homogeneous");
  const int degree = f0.degree();
  if (degree < 2 || degree % 2 != 0) {
    throw Error(ErrorKind::OddDegree, "objective degree must be even and at least 2");
  }
  const int d = degree / 2;

  std::vector<SparsePolynomial> grad;
  grad.reserve(static_cast<std::size_t>(num_vars));
  for (int k = 0; k < num_vars; ++k) grad.push_back(partial_derivative(f0, k));

  std::vector<KktMinor> minors;
  minors.reserve(static_cast<std::size_t>(num_vars * (num_vars - 1) / 2));
  for (int i = 0; i < num_vars; ++i) {
    for (int j = i + 1; j < num_vars; ++j) {
      // d_i f0 * 2 x_j - d_j f0 * 2 x_i
      SparsePolynomial g = grad[static_cast<std::size_t>(i)] *
                               SparsePolynomial::monomial(MultiIndex::unit(num_vars, j), 2.0) -
                           grad[static_cast<std::size_t>(j)] *
                               SparsePolynomial::monomial(MultiIndex::unit(num_vars, i), 2.0);
      SymmetricTensor gamma = poly_to_tensor(g, d);
      minors.push_back(KktMinor{i, j, std::move(g), std::move(gamma)});
    }
  }
  return KktSystem(f0, std::move(minors));
}

double kkt_residual(const KktSystem& sys, std::span<const double> x) {
  if (static_cast<int>(x.size()) != sys.num_vars()) {
    throw Error(ErrorKind::DimensionMismatch, "point size");
  }
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8) {
    throw Error(ErrorKind::NotOnSphere, "kkt_residual needs a unit vector");
  }
  double residual = std::abs(sys.sphere().evaluate(x));
  for (const auto& m : sys.minors()) residual = std::max(residual, std::abs(m.polynomial.evaluate(x)));
  return residual;
}

}  // namespace sephier
