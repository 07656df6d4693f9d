#include "sephier/tensor_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sephier/error.hpp"

namespace sephier {

// ---------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) throw Error(ErrorKind::InvalidInput, "negative exponent");
    degree_ += e;
  }
}

MultiIndex MultiIndex::zero(int num_vars) {
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(num_vars), 0));
}

MultiIndex MultiIndex::unit(int num_vars, int var, int power) {
  std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
  e.at(static_cast<std::size_t>(var)) = power;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::from_indices(int num_vars, std::span<const int> indices) {
  std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
  for (int i : indices) {
    if (i < 0 || i >= num_vars) throw Error(ErrorKind::DimensionMismatch, "index out of range");
    ++e[static_cast<std::size_t>(i)];
  }
  return MultiIndex(std::move(e));
}

std::vector<int> MultiIndex::indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(degree_));
  for (int i = 0; i < num_vars(); ++i) {
    for (int k = 0; k < exponents_[static_cast<std::size_t>(i)]; ++k) out.push_back(i);
  }
  return out;
}

bool MultiIndex::divides(const MultiIndex& other) const {
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (exponents_[i] > other.exponents_[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::lcm(const MultiIndex& other) const {
  std::vector<int> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(exponents_[i], other.exponents_[i]);
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.num_vars() != num_vars()) throw Error(ErrorKind::DimensionMismatch, "monomial arity");
  std::vector<int> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = exponents_[i] + other.exponents_[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  std::vector<int> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = exponents_[i] - other.exponents_[i];
  return MultiIndex(std::move(e));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < num_vars(); ++i) {
    const int e = exponents_[static_cast<std::size_t>(i)];
    if (e == 0) continue;
    if (!first) os << '*';
    os << 'x' << (i + 1);
    if (e > 1) os << '^' << e;
    first = false;
  }
  if (first) os << '1';
  return os.str();
}

bool grlex_greater(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  return a.exponents() > b.exponents();
}

bool GrlexGreater::operator()(const MultiIndex& a, const MultiIndex& b) const {
  return grlex_greater(a, b);
}

namespace {

void enumerate_monomials(int var, int remaining, std::vector<int>& current,
                         std::vector<MultiIndex>& out) {
  const int m = static_cast<int>(current.size());
  if (var == m - 1) {
    current[static_cast<std::size_t>(var)] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate_monomials(var + 1, remaining - e, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(int num_vars, int degree) {
  if (num_vars < 1 || degree < 0) throw Error(ErrorKind::InvalidInput, "monomials_of_degree");
  std::vector<MultiIndex> out;
  std::vector<int> current(static_cast<std::size_t>(num_vars), 0);
  enumerate_monomials(0, degree, current, out);
  return out;
}

std::uint64_t monomial_count(int num_vars, int degree) {
  if (num_vars < 1 || degree < 0) throw Error(ErrorKind::InvalidInput, "monomial_count");
  unsigned __int128 result = 1;
  for (int i = 1; i <= degree; ++i) {
    result = result * static_cast<unsigned __int128>(num_vars - 1 + i);
    result /= static_cast<unsigned __int128>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorKind::Overflow, "monomial count exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

double multinomial(const MultiIndex& alpha) {
  // Product of binomials C(partial_sum, alpha_i) keeps intermediates small.
  double result = 1.0;
  int total = 0;
  for (int e : alpha.exponents()) {
    for (int k = 1; k <= e; ++k) {
      ++total;
      result = result * total / k;
    }
  }
  return std::round(result);
}

// ----------------------------------------------------------- SparsePolynomial

SparsePolynomial SparsePolynomial::constant(int num_vars, double value) {
  SparsePolynomial p(num_vars);
  p.add_term(MultiIndex::zero(num_vars), value);
  return p;
}

SparsePolynomial SparsePolynomial::variable(int num_vars, int var) {
  return monomial(MultiIndex::unit(num_vars, var), 1.0);
}

SparsePolynomial SparsePolynomial::monomial(const MultiIndex& alpha, double coeff) {
  SparsePolynomial p(alpha.num_vars());
  p.add_term(alpha, coeff);
  return p;
}

SparsePolynomial SparsePolynomial::sphere_power(int num_vars, int k) {
  SparsePolynomial sq(num_vars);
  for (int i = 0; i < num_vars; ++i) sq.add_term(MultiIndex::unit(num_vars, i, 2), 1.0);
  return pow(sq, k);
}

double SparsePolynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void SparsePolynomial::add_term(const MultiIndex& alpha, double coeff) {
  if (alpha.num_vars() != num_vars_) throw Error(ErrorKind::DimensionMismatch, "term arity");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int SparsePolynomial::degree() const {
  if (terms_.empty()) return -1;
  return terms_.begin()->first.degree();
}

bool SparsePolynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = degree();
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& t) { return t.first.degree() == d; });
}

double SparsePolynomial::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "evaluation point size");
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double v = c;
    for (int i = 0; i < num_vars_; ++i) {
      const int e = alpha[i];
      for (int k = 0; k < e; ++k) v *= x[static_cast<std::size_t>(i)];
    }
    sum += v;
  }
  return sum;
}

std::vector<double> SparsePolynomial::gradient(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "gradient point size");
  }
  std::vector<double> g(static_cast<std::size_t>(num_vars_), 0.0);
  for (const auto& [alpha, c] : terms_) {
    for (int j = 0; j < num_vars_; ++j) {
      if (alpha[j] == 0) continue;
      double v = c * alpha[j];
      for (int i = 0; i < num_vars_; ++i) {
        const int e = alpha[i] - (i == j ? 1 : 0);
        for (int k = 0; k < e; ++k) v *= x[static_cast<std::size_t>(i)];
      }
      g[static_cast<std::size_t>(j)] += v;
    }
  }
  return g;
}

double SparsePolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.second));
  return m;
}

double SparsePolynomial::l1_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.second);
  return s;
}

void SparsePolynomial::check_vars(const SparsePolynomial& other) const {
  if (other.num_vars_ != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "polynomials over different variable counts");
  }
}

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& other) {
  check_vars(other);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

SparsePolynomial& SparsePolynomial::operator-=(const SparsePolynomial& other) {
  check_vars(other);
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

SparsePolynomial& SparsePolynomial::operator*=(double scalar) {
  if (scalar == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= scalar;
  return *this;
}

SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
  a.check_vars(b);
  SparsePolynomial out(a.num_vars());
  for (const auto& [ai, ac] : a.terms_) {
    for (const auto& [bi, bc] : b.terms_) out.add_term(ai + bi, ac * bc);
  }
  return out;
}

std::string SparsePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    os << std::abs(c);
    if (alpha.degree() > 0) os << '*' << alpha.to_string();
    first = false;
  }
  return os.str();
}

SparsePolynomial partial_derivative(const SparsePolynomial& p, int var) {
  if (var < 0 || var >= p.num_vars()) throw Error(ErrorKind::DimensionMismatch, "variable index");
  SparsePolynomial out(p.num_vars());
  for (const auto& [alpha, c] : p.terms()) {
    const int e = alpha[var];
    if (e == 0) continue;
    std::vector<int> exps = alpha.exponents();
    --exps[static_cast<std::size_t>(var)];
    out.add_term(MultiIndex(std::move(exps)), c * e);
  }
  return out;
}

SparsePolynomial pow(const SparsePolynomial& p, int exponent) {
  if (exponent < 0) throw Error(ErrorKind::InvalidInput, "negative power");
  SparsePolynomial result = SparsePolynomial::constant(p.num_vars(), 1.0);
  SparsePolynomial base = p;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

double max_coefficient_difference(const SparsePolynomial& a, const SparsePolynomial& b) {
  return (a - b).max_abs_coefficient();
}

// ------------------------------------------------------------ SymmetricTensor

SymmetricTensor::SymmetricTensor(int num_vars, int half_rank)
    : num_vars_(num_vars), half_rank_(half_rank) {
  if (num_vars < 1 || half_rank < 0) throw Error(ErrorKind::InvalidInput, "tensor shape");
}

SymmetricTensor SymmetricTensor::identity(int num_vars, int half_rank) {
  return poly_to_tensor(SparsePolynomial::sphere_power(num_vars, half_rank), half_rank);
}

MultiIndex SymmetricTensor::key(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != rank()) {
    throw Error(ErrorKind::RankMismatch, "index tuple length differs from tensor rank");
  }
  return MultiIndex::from_indices(num_vars_, indices);
}

double SymmetricTensor::coefficient(std::span<const int> indices) const {
  return coefficient(key(indices));
}

void SymmetricTensor::set_coefficient(std::span<const int> indices, double value) {
  set_coefficient(key(indices), value);
}

double SymmetricTensor::coefficient(const MultiIndex& multiset) const {
  auto it = entries_.find(multiset);
  return it == entries_.end() ? 0.0 : it->second;
}

void SymmetricTensor::set_coefficient(const MultiIndex& multiset, double value) {
  if (multiset.num_vars() != num_vars_ || multiset.degree() != rank()) {
    throw Error(ErrorKind::RankMismatch, "multiset does not match tensor shape");
  }
  if (value == 0.0) {
    entries_.erase(multiset);
  } else {
    entries_[multiset] = value;
  }
}

double SymmetricTensor::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != num_vars_) {
    throw Error(ErrorKind::DimensionMismatch, "evaluation point size");
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : entries_) {
    double v = c * multinomial(alpha);
    for (int i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < alpha[i]; ++k) v *= x[static_cast<std::size_t>(i)];
    }
    sum += v;
  }
  return sum;
}

SymmetricTensor symmetrize(const RawTensor& raw) {
  if (raw.num_vars < 1 || raw.rank < 0 || raw.rank % 2 != 0) {
    throw Error(ErrorKind::RankMismatch, "symmetrize needs an even rank");
  }
  std::size_t expected = 1;
  for (int s = 0; s < raw.rank; ++s) expected *= static_cast<std::size_t>(raw.num_vars);
  if (raw.data.size() != expected) {
    throw Error(ErrorKind::RankMismatch, "raw tensor size is not num_vars^rank");
  }
  std::map<MultiIndex, std::pair<double, int>, GrlexGreater> buckets;
  std::vector<int> idx(static_cast<std::size_t>(raw.rank), 0);
  for (std::size_t flat = 0; flat < expected; ++flat) {
    std::size_t rem = flat;
    for (int s = raw.rank - 1; s >= 0; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(raw.num_vars));
      rem /= static_cast<std::size_t>(raw.num_vars);
    }
    auto& bucket = buckets[MultiIndex::from_indices(raw.num_vars, idx)];
    bucket.first += raw.data[flat];
    ++bucket.second;
  }
  SymmetricTensor out(raw.num_vars, raw.rank / 2);
  for (const auto& [alpha, acc] : buckets) out.set_coefficient(alpha, acc.first / acc.second);
  return out;
}

SparsePolynomial tensor_to_poly(const SymmetricTensor& tensor) {
  SparsePolynomial p(tensor.num_vars());
  for (const auto& [alpha, c] : tensor.entries()) p.add_term(alpha, c * multinomial(alpha));
  return p;
}

SymmetricTensor poly_to_tensor(const SparsePolynomial& poly, int half_rank) {
  SymmetricTensor out(poly.num_vars(), half_rank);
  for (const auto& [alpha, c] : poly.terms()) {
    if (alpha.degree() != 2 * half_rank) {
      throw Error(ErrorKind::NotHomogeneous,
                  "term " + alpha.to_string() + " has degree other than " +
                      std::to_string(2 * half_rank));
    }
    out.set_coefficient(alpha, c / multinomial(alpha));
  }
  return out;
}

SymmetricTensor poly_to_tensor(const SparsePolynomial& poly) {
  if (poly.is_zero()) {
    throw Error(ErrorKind::NotHomogeneous, "zero polynomial has no degree; pass the rank");
  }
  if (!poly.is_homogeneous()) throw Error(ErrorKind::NotHomogeneous, "polynomial is not homogeneous");
  if (poly.degree() % 2 != 0) throw Error(ErrorKind::OddDegree, "tensor needs even degree");
  return poly_to_tensor(poly, poly.degree() / 2);
}

// -------------------------------------------------- ComplexHermitianOperator

int checked_power(int base, int exponent) {
  long long v = 1;
  for (int i = 0; i < exponent; ++i) {
    v *= base;
    if (v > std::numeric_limits<int>::max()) throw Error(ErrorKind::Overflow, "dimension overflow");
  }
  return static_cast<int>(v);
}

ComplexHermitianOperator::ComplexHermitianOperator(int local_dim, int copies,
                                                   Eigen::MatrixXcd entries)
    : local_dim_(local_dim), copies_(copies), entries_(std::move(entries)) {
  if (local_dim < 1 || copies < 1) throw Error(ErrorKind::InvalidInput, "operator shape");
  const int side = checked_power(local_dim, copies);
  if (entries_.rows() != side || entries_.cols() != side) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix side must be n^d = " + std::to_string(side));
  }
  for (int r = 0; r < side; ++r) {
    for (int c = r; c < side; ++c) {
      if (std::abs(entries_(r, c) - std::conj(entries_(c, r))) > kHermitianTolerance) {
        throw Error(ErrorKind::NotHermitian, "entry (" + std::to_string(r) + "," +
                                                 std::to_string(c) + ") violates conjugate symmetry");
      }
    }
  }
}

ComplexHermitianOperator ComplexHermitianOperator::identity(int local_dim, int copies) {
  const int side = checked_power(local_dim, copies);
  return ComplexHermitianOperator(local_dim, copies, Eigen::MatrixXcd::Identity(side, side));
}

double ComplexHermitianOperator::product_expectation(std::span<const std::complex<double>> a) const {
  if (static_cast<int>(a.size()) != local_dim_) {
    throw Error(ErrorKind::DimensionMismatch, "local vector size");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  Eigen::VectorXcd av(local_dim_);
  for (int i = 0; i < local_dim_; ++i) av(i) = a[static_cast<std::size_t>(i)];
  for (int t = 0; t < copies_; ++t) {
    Eigen::VectorXcd next(v.size() * local_dim_);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      for (int j = 0; j < local_dim_; ++j) next(i * local_dim_ + j) = v(i) * av(j);
    }
    v = std::move(next);
  }
  return (v.adjoint() * entries_ * v)(0, 0).real();
}

SymmetricTensor realify(const ComplexHermitianOperator& op) {
  const int n = op.local_dim();
  const int d = op.copies();
  const int m = 2 * n;
  const int side = op.side();
  using Complex = std::complex<double>;
  std::map<MultiIndex, Complex, GrlexGreater> acc;

  std::vector<int> row_digits(static_cast<std::size_t>(d));
  std::vector<int> col_digits(static_cast<std::size_t>(d));
  auto digits = [n, d](int index, std::vector<int>& out) {
    for (int t = d - 1; t >= 0; --t) {
      out[static_cast<std::size_t>(t)] = index % n;
      index /= n;
    }
  };

  // conj(a_i) = x_i - i x_{n+i},  a_j = x_j + i x_{n+j}
  const int factors = 2 * d;
  std::vector<int> exps(static_cast<std::size_t>(m));
  for (int r = 0; r < side; ++r) {
    digits(r, row_digits);
    for (int c = 0; c < side; ++c) {
      const Complex entry = op.matrix()(r, c);
      if (entry == Complex(0.0, 0.0)) continue;
      digits(c, col_digits);
      for (int choice = 0; choice < (1 << factors); ++choice) {
        std::fill(exps.begin(), exps.end(), 0);
        Complex coeff = entry;
        for (int f = 0; f < factors; ++f) {
          const bool conjugated = f < d;
          const int var = conjugated ? row_digits[static_cast<std::size_t>(f)]
                                     : col_digits[static_cast<std::size_t>(f - d)];
          const bool imaginary = (choice >> f) & 1;
          if (imaginary) {
            ++exps[static_cast<std::size_t>(n + var)];
            coeff *= conjugated ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
          } else {
            ++exps[static_cast<std::size_t>(var)];
          }
        }
        acc[MultiIndex(exps)] += coeff;
      }
    }
  }
  // Cross terms cancel analytically; drop their rounding residue.
  const double scale = op.matrix().cwiseAbs().maxCoeff();
  SparsePolynomial poly(m);
  for (const auto& [alpha, c] : acc) {
    if (std::abs(c.real()) > 1e-14 * scale) poly.add_term(alpha, c.real());
  }
  return poly_to_tensor(poly, d);
}

}  // namespace sephier
