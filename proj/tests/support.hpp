#pragma once

// Seeded instance generators shared by the unit tests and the acceptance
// binary.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sephier/groebner.hpp"
#include "sephier/random.hpp"
#include "sephier/sdp.hpp"
#include "sephier/tensor_poly.hpp"

namespace sephier::testing {

/// Homogeneous degree-2d polynomial with standard normal coefficients on
/// every monomial.
inline SparsePolynomial random_form(int m, int degree, std::uint64_t seed, std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  SparsePolynomial p(m);
  for (const auto& alpha : monomials_of_degree(m, degree)) p.add_term(alpha, rng.normal());
  return p;
}

/// Integer coefficients uniform in [-bound, bound].
inline RationalPolynomial random_integer_form(int m, int degree, int bound, std::uint64_t seed,
                                              std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  RationalPolynomial p(m);
  for (const auto& alpha : monomials_of_degree(m, degree)) {
    const long c = static_cast<long>(rng.next() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
    if (c != 0) p.add_term(alpha, Rational(c));
  }
  return p;
}

/// Rational polynomial of degree <= max_degree with small random
/// fractions on a random subset of monomials.
inline RationalPolynomial random_rational_polynomial(int m, int max_degree, std::uint64_t seed,
                                                     std::uint64_t stream = 0) {
  CounterRng rng(seed, stream);
  RationalPolynomial p(m);
  for (int deg = 0; deg <= max_degree; ++deg) {
    for (const auto& alpha : monomials_of_degree(m, deg)) {
      if (rng.uniform() < 0.5) continue;
      const long num = static_cast<long>(rng.next() % 19) - 9;
      const long den = static_cast<long>(rng.next() % 7) + 1;
      if (num != 0) p.add_term(alpha, Rational(num, den));
    }
  }
  return p;
}

inline Eigen::MatrixXd random_symmetric(int n, CounterRng& rng) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return 0.5 * (a + a.transpose());
}

inline Eigen::MatrixXcd random_hermitian(int n, CounterRng& rng) {
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {rng.normal(), rng.normal()};
  return 0.5 * (a + a.adjoint());
}

/// Standard-form SDP with a known strictly feasible primal point X0 and a
/// strictly feasible dual (y0, S0), so strong duality holds and the optimum
/// is attained.
inline SdpProblem random_feasible_sdp(std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  const int num_blocks = 1 + static_cast<int>(rng.next() % 3);
  std::vector<int> sizes;
  int total_side = 0;
  for (int b = 0; b < num_blocks; ++b) {
    sizes.push_back(2 + static_cast<int>(rng.next() % 29));
    total_side += sizes.back();
  }
  const int max_rows = std::min(60, total_side * (total_side + 1) / 2);
  const int rows = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_rows));

  SdpProblem p;
  p.block_sizes = sizes;
  p.sense = Sense::Minimize;
  std::vector<Eigen::MatrixXd> x0, s0;
  for (int n : sizes) {
    Eigen::MatrixXd g = random_symmetric(n, rng);
    x0.push_back(g * g.transpose() / n + Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd h = random_symmetric(n, rng);
    s0.push_back(h * h.transpose() / n + Eigen::MatrixXd::Identity(n, n));
  }
  Eigen::VectorXd y0(rows);
  std::vector<std::vector<Eigen::MatrixXd>> a(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    y0(i) = rng.normal();
    SparseBlockMatrix entries;
    double bi = 0.0;
    for (int b = 0; b < num_blocks; ++b) {
      Eigen::MatrixXd ab = random_symmetric(sizes[static_cast<std::size_t>(b)], rng);
      bi += (ab.array() * x0[static_cast<std::size_t>(b)].array()).sum();
      append_dense(entries, b, ab);
      a[static_cast<std::size_t>(i)].push_back(std::move(ab));
    }
    p.add_constraint(std::move(entries), bi);
  }
  for (int b = 0; b < num_blocks; ++b) {
    Eigen::MatrixXd c = s0[static_cast<std::size_t>(b)];
    for (int i = 0; i < rows; ++i) c += y0(i) * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
    append_dense(p.objective, b, c);
  }
  return p;
}

}  // namespace sephier::testing
