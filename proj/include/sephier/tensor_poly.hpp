#pragma once

// Real polynomials, fully symmetric tensors and the realification of
// complex Hermitian operators acting on d copies of C^n.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sephier {

/// Exponent vector of a monomial. Also used as the canonical key of an index
/// multiset: exponent i counts how often variable i occurs.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int num_vars);
  static MultiIndex unit(int num_vars, int var, int power = 1);
  /// Multiset of variable indices (any order) to exponent vector.
  static MultiIndex from_indices(int num_vars, std::span<const int> indices);

  int num_vars() const { return static_cast<int>(exponents_.size()); }
  int degree() const { return degree_; }
  int operator[](int i) const { return exponents_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const { return exponents_; }

  /// Sorted variable indices, each repeated by its exponent.
  std::vector<int> indices() const;

  bool divides(const MultiIndex& other) const;
  MultiIndex lcm(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// Requires divides(*this, other) in the reverse sense: other | *this.
  MultiIndex operator-(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string to_string() const;

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

/// Graded lexicographic order with x_1 > x_2 > ... . As a map comparator it
/// sorts in *descending* order, so the first entry is the leading monomial.
struct GrlexGreater {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// True if a > b in graded lex order.
bool grlex_greater(const MultiIndex& a, const MultiIndex& b);

/// All exponent vectors of total degree `degree` in `num_vars` variables,
/// in descending graded-lex order (x_1^D first).
std::vector<MultiIndex> monomials_of_degree(int num_vars, int degree);

/// C(m + D - 1, D), the number of monomials of degree D in m variables.
/// Throws Error(Overflow) instead of wrapping.
std::uint64_t monomial_count(int num_vars, int degree);

/// (sum alpha_i)! / prod alpha_i!, the number of distinct index orderings
/// of the multiset alpha.
double multinomial(const MultiIndex& alpha);

class SparsePolynomial {
 public:
  using Terms = std::map<MultiIndex, double, GrlexGreater>;

  explicit SparsePolynomial(int num_vars = 0) : num_vars_(num_vars) {}

  static SparsePolynomial constant(int num_vars, double value);
  static SparsePolynomial variable(int num_vars, int var);
  static SparsePolynomial monomial(const MultiIndex& alpha, double coeff = 1.0);
  /// (x_1^2 + ... + x_m^2)^k
  static SparsePolynomial sphere_power(int num_vars, int k);

  int num_vars() const { return num_vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double coefficient(const MultiIndex& alpha) const;
  /// Accumulates; an exactly cancelled coefficient is erased.
  void add_term(const MultiIndex& alpha, double coeff);

  /// -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  double evaluate(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

  double max_abs_coefficient() const;
  double l1_norm() const;

  SparsePolynomial& operator+=(const SparsePolynomial& other);
  SparsePolynomial& operator-=(const SparsePolynomial& other);
  SparsePolynomial& operator*=(double scalar);

  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
  friend SparsePolynomial operator*(SparsePolynomial a, double s) { return a *= s; }
  friend SparsePolynomial operator*(double s, SparsePolynomial a) { return a *= s; }
  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b);
  SparsePolynomial operator-() const { return *this * -1.0; }

  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

  std::string to_string() const;

 private:
  void check_vars(const SparsePolynomial& other) const;

  int num_vars_;
  Terms terms_;
};

SparsePolynomial partial_derivative(const SparsePolynomial& p, int var);
SparsePolynomial pow(const SparsePolynomial& p, int exponent);
/// Max absolute coefficient of a - b.
double max_coefficient_difference(const SparsePolynomial& a, const SparsePolynomial& b);

/// Fully symmetric real tensor of rank 2k over num_vars symbols. Storage is
/// one coefficient per index multiset, so permutation invariance holds by
/// construction.
class SymmetricTensor {
 public:
  using Entries = std::map<MultiIndex, double, GrlexGreater>;

  SymmetricTensor(int num_vars, int half_rank);

  /// The symmetrized identity power 1^{(x)k}; contracts to ||x||^{2k}.
  static SymmetricTensor identity(int num_vars, int half_rank);

  int num_vars() const { return num_vars_; }
  int half_rank() const { return half_rank_; }
  int rank() const { return 2 * half_rank_; }
  const Entries& entries() const { return entries_; }

  /// Coefficient at an index tuple of length 2k, in any order.
  double coefficient(std::span<const int> indices) const;
  void set_coefficient(std::span<const int> indices, double value);
  double coefficient(const MultiIndex& multiset) const;
  void set_coefficient(const MultiIndex& multiset, double value);

  /// Full contraction with 2k copies of x.
  double evaluate(std::span<const double> x) const;

  friend bool operator==(const SymmetricTensor&, const SymmetricTensor&) = default;

 private:
  MultiIndex key(std::span<const int> indices) const;

  int num_vars_;
  int half_rank_;
  Entries entries_;
};

/// Dense rank-r array over num_vars symbols, row-major in the index slots.
struct RawTensor {
  int num_vars = 0;
  int rank = 0;
  std::vector<double> data;
};

/// Projection onto the fully index-symmetric part.
SymmetricTensor symmetrize(const RawTensor& raw);

SparsePolynomial tensor_to_poly(const SymmetricTensor& tensor);
/// Requires a homogeneous polynomial of even degree (the zero polynomial
/// needs the explicit overload).
SymmetricTensor poly_to_tensor(const SparsePolynomial& poly);
SymmetricTensor poly_to_tensor(const SparsePolynomial& poly, int half_rank);

/// Hermitian operator on (C^n)^{(x)d}. Row index (i_1 ... i_d) is encoded
/// base-n, big-endian, 0-based.
class ComplexHermitianOperator {
 public:
  static constexpr double kHermitianTolerance = 1e-12;

  ComplexHermitianOperator(int local_dim, int copies, Eigen::MatrixXcd entries);

  static ComplexHermitianOperator identity(int local_dim, int copies);

  int local_dim() const { return local_dim_; }
  int copies() const { return copies_; }
  int side() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return entries_; }

  /// <a|^{(x)d} M |a>^{(x)d}
  double product_expectation(std::span<const std::complex<double>> a) const;

 private:
  int local_dim_;
  int copies_;
  Eigen::MatrixXcd entries_;
};

/// Integer power with overflow check; used for n^d style sizes.
int checked_power(int base, int exponent);

/// Real tensor over 2n variables x = (Re a, Im a) whose contraction equals
/// <a|^{(x)d} M |a>^{(x)d}.
SymmetricTensor realify(const ComplexHermitianOperator& op);

}  // namespace sephier
