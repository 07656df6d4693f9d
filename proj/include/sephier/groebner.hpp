#pragma once

// Exact-rational computational algebra for the KKT ideal
//   I_K = < f_1, g_ij >.
// Monomial order is graded lex with x_1 > x_2 > ... throughout.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sephier/tensor_poly.hpp"

namespace sephier {

using Rational = mpq_class;

class RationalPolynomial {
 public:
  using Terms = std::map<MultiIndex, Rational, GrlexGreater>;

  explicit RationalPolynomial(int num_vars = 0) : num_vars_(num_vars) {}

  static RationalPolynomial constant(int num_vars, const Rational& value);
  static RationalPolynomial monomial(const MultiIndex& alpha, const Rational& coeff);
  /// Converts each double exactly (its full binary expansion). Noisy float
  /// data should go through snap_to_rational instead.
  static RationalPolynomial from_exact(const SparsePolynomial& p);

  int num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Leading monomial / coefficient; precondition: nonzero.
  const MultiIndex& leading_monomial() const { return terms_.begin()->first; }
  const Rational& leading_coefficient() const { return terms_.begin()->second; }

  int degree() const;
  bool is_homogeneous() const;
  Rational coefficient(const MultiIndex& alpha) const;
  void add_term(const MultiIndex& alpha, const Rational& coeff);

  RationalPolynomial& operator+=(const RationalPolynomial& other);
  RationalPolynomial& operator-=(const RationalPolynomial& other);
  RationalPolynomial& operator*=(const Rational& scalar);
  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& s) { return a *= s; }

  /// this -= coeff * x^shift * other
  void subtract_scaled_shifted(const RationalPolynomial& other, const Rational& coeff,
                               const MultiIndex& shift);

  RationalPolynomial monic() const;
  SparsePolynomial to_double() const;

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

  std::string to_string() const;

 private:
  int num_vars_;
  Terms terms_;
};

RationalPolynomial partial_derivative(const RationalPolynomial& p, int var);

struct GroebnerBasis {
  std::string ordering = "grlex";
  std::vector<RationalPolynomial> elements;
  int max_degree = 0;
};

/// Reduced Groebner basis by Buchberger's algorithm (normal selection
/// strategy, coprime and chain criteria). Throws CapExceededError when a
/// pair that must be reduced has lcm degree above degree_cap.
GroebnerBasis buchberger(std::vector<RationalPolynomial> generators, int degree_cap = 30);

RationalPolynomial s_polynomial(const RationalPolynomial& a, const RationalPolynomial& b);

struct Division {
  std::vector<RationalPolynomial> quotients;
  RationalPolynomial remainder;
};

/// Multivariate division: f = sum quotients[i] * divisors[i] + remainder,
/// no remainder term divisible by any leading monomial.
Division reduce(const RationalPolynomial& f, std::span<const RationalPolynomial> divisors);
inline Division reduce(const RationalPolynomial& f, const GroebnerBasis& basis) {
  return reduce(f, basis.elements);
}

/// Every variable has a pure power among the leading monomials.
bool is_zero_dimensional(const GroebnerBasis& basis);

/// Dimension of the variety of the leading-monomial ideal; -1 for the unit
/// ideal.
int ideal_dimension(const GroebnerBasis& basis);

/// Adds x_0 as variable 0 and multiplies each term up to deg(f).
RationalPolynomial homogenize(const RationalPolynomial& f);
/// Sets x_0 = 1 and drops it. Throws NotHomogeneous on mixed-degree input.
RationalPolynomial dehomogenize(const RationalPolynomial& f);

/// 2 (d^{n-r} / 2 + d)^{2^r}, exact.
Rational degree_bound_report(int n, int d, int r);

/// n (D - 1).
int remainder_degree_bound(int n, int basis_degree);

/// Nearest rational with denominator <= cap (best approximation from the
/// continued fraction, semiconvergents included).
Rational snap_value(double value, std::int64_t denominator_cap);

struct SnapResult {
  RationalPolynomial polynomial;
  double max_distance = 0.0;
};

SnapResult snap_to_rational(const SparsePolynomial& p, std::int64_t denominator_cap = 1'000'000);

/// f_1 = sum x_i^2 - 1 followed by the nonzero g_ij (i < j), exact.
std::vector<RationalPolynomial> kkt_generators(const RationalPolynomial& f0);

/// Homogenized KKT generators in variables (x_0, x_1, ..., x_m): the minors
/// are already homogeneous of degree 2d; the sphere constraint is lifted to
/// the same degree as x_0^{2d-2} (sum x_i^2 - x_0^2).
std::vector<RationalPolynomial> homogenized_kkt_generators(const RationalPolynomial& f0);

std::string to_string(const Rational& q);

}  // namespace sephier
