#include "sephier/groebner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "sephier/error.hpp"

namespace sephier {

// --------------------------------------------------------- RationalPolynomial

RationalPolynomial RationalPolynomial::constant(int num_vars, const Rational& value) {
  RationalPolynomial p(num_vars);
  p.add_term(MultiIndex::zero(num_vars), value);
  return p;
}

RationalPolynomial RationalPolynomial::monomial(const MultiIndex& alpha, const Rational& coeff) {
  RationalPolynomial p(alpha.num_vars());
  p.add_term(alpha, coeff);
  return p;
}

RationalPolynomial RationalPolynomial::from_exact(const SparsePolynomial& p) {
  RationalPolynomial out(p.num_vars());
  for (const auto& [alpha, c] : p.terms()) out.add_term(alpha, Rational(c));
  return out;
}

int RationalPolynomial::degree() const {
  return terms_.empty() ? -1 : terms_.begin()->first.degree();
}

bool RationalPolynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  const int d = degree();
  return std::all_of(terms_.begin(), terms_.end(),
                     [d](const auto& t) { return t.first.degree() == d; });
}

Rational RationalPolynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Rational(0) : it->second;
}

void RationalPolynomial::add_term(const MultiIndex& alpha, const Rational& coeff) {
  if (alpha.num_vars() != num_vars_) throw Error(ErrorKind::DimensionMismatch, "term arity");
  if (sgn(coeff) == 0) return;
  auto [it, inserted] = terms_.try_emplace(alpha, coeff);
  if (inserted) {
    // mpq_class(num, den) does not reduce on construction.
    it->second.canonicalize();
  } else {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& other) {
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& other) {
  for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
  return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& scalar) {
  if (sgn(scalar) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= scalar;
  return *this;
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw Error(ErrorKind::DimensionMismatch, "polynomial arity");
  RationalPolynomial out(a.num_vars_);
  for (const auto& [ai, ac] : a.terms_) {
    for (const auto& [bi, bc] : b.terms_) out.add_term(ai + bi, ac * bc);
  }
  return out;
}

void RationalPolynomial::subtract_scaled_shifted(const RationalPolynomial& other,
                                                 const Rational& coeff, const MultiIndex& shift) {
  for (const auto& [alpha, c] : other.terms_) add_term(alpha + shift, -(coeff * c));
}

RationalPolynomial RationalPolynomial::monic() const {
  if (terms_.empty()) return *this;
  RationalPolynomial out = *this;
  const Rational inv = 1 / leading_coefficient();
  out *= inv;
  return out;
}

SparsePolynomial RationalPolynomial::to_double() const {
  SparsePolynomial out(num_vars_);
  for (const auto& [alpha, c] : terms_) out.add_term(alpha, c.get_d());
  return out;
}

std::string RationalPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, c] : terms_) {
    const bool negative = sgn(c) < 0;
    if (!first) os << (negative ? " - " : " + ");
    else if (negative) os << '-';
    const Rational mag = abs(c);
    const bool unit = mag == 1 && alpha.degree() > 0;
    if (!unit) os << sephier::to_string(mag);
    if (alpha.degree() > 0) os << (unit ? "" : "*") << alpha.to_string();
    first = false;
  }
  return os.str();
}

std::string to_string(const Rational& q) { return q.get_str(); }

RationalPolynomial partial_derivative(const RationalPolynomial& p, int var) {
  RationalPolynomial out(p.num_vars());
  for (const auto& [alpha, c] : p.terms()) {
    const int e = alpha[var];
    if (e == 0) continue;
    std::vector<int> exps = alpha.exponents();
    --exps[static_cast<std::size_t>(var)];
    out.add_term(MultiIndex(std::move(exps)), c * e);
  }
  return out;
}

// ------------------------------------------------------------------ Division

namespace {

int find_divisor(const MultiIndex& mono, std::span<const RationalPolynomial> divisors) {
  for (std::size_t k = 0; k < divisors.size(); ++k) {
    if (divisors[k].leading_monomial().divides(mono)) return static_cast<int>(k);
  }
  return -1;
}

/// Full reduction without quotient bookkeeping.
RationalPolynomial normal_form(RationalPolynomial p, std::span<const RationalPolynomial> divisors) {
  RationalPolynomial remainder(p.num_vars());
  while (!p.is_zero()) {
    const MultiIndex lm = p.leading_monomial();
    const int k = find_divisor(lm, divisors);
    if (k < 0) {
      const Rational lc = p.leading_coefficient();
      remainder.add_term(lm, lc);
      p.add_term(lm, -lc);
      continue;
    }
    const auto& g = divisors[static_cast<std::size_t>(k)];
    const Rational q = p.leading_coefficient() / g.leading_coefficient();
    p.subtract_scaled_shifted(g, q, lm - g.leading_monomial());
  }
  return remainder;
}

}  // namespace

Division reduce(const RationalPolynomial& f, std::span<const RationalPolynomial> divisors) {
  for (const auto& g : divisors) {
    if (g.is_zero()) throw Error(ErrorKind::InvalidInput, "zero divisor in reduce");
    if (g.num_vars() != f.num_vars()) throw Error(ErrorKind::DimensionMismatch, "divisor arity");
  }
  Division out;
  out.quotients.assign(divisors.size(), RationalPolynomial(f.num_vars()));
  out.remainder = RationalPolynomial(f.num_vars());
  RationalPolynomial p = f;
  while (!p.is_zero()) {
    const MultiIndex lm = p.leading_monomial();
    const int k = find_divisor(lm, divisors);
    if (k < 0) {
      const Rational lc = p.leading_coefficient();
      out.remainder.add_term(lm, lc);
      p.add_term(lm, -lc);
      continue;
    }
    const auto& g = divisors[static_cast<std::size_t>(k)];
    const Rational q = p.leading_coefficient() / g.leading_coefficient();
    const MultiIndex shift = lm - g.leading_monomial();
    out.quotients[static_cast<std::size_t>(k)].add_term(shift, q);
    p.subtract_scaled_shifted(g, q, shift);
  }
  return out;
}

RationalPolynomial s_polynomial(const RationalPolynomial& a, const RationalPolynomial& b) {
  const MultiIndex l = a.leading_monomial().lcm(b.leading_monomial());
  RationalPolynomial s(a.num_vars());
  s.subtract_scaled_shifted(a, -1 / a.leading_coefficient(), l - a.leading_monomial());
  s.subtract_scaled_shifted(b, 1 / b.leading_coefficient(), l - b.leading_monomial());
  return s;
}

// ---------------------------------------------------------------- Buchberger

namespace {

struct CriticalPair {
  int i;
  int j;
  MultiIndex lcm;
};

/// Normal strategy: smallest lcm in the order first.
struct PairOrder {
  bool operator()(const CriticalPair& a, const CriticalPair& b) const {
    if (a.lcm != b.lcm) return grlex_greater(b.lcm, a.lcm);
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  }
};

std::pair<int, int> key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

GroebnerBasis buchberger(std::vector<RationalPolynomial> generators, int degree_cap) {
  std::vector<RationalPolynomial> g;
  int num_vars = -1;
  for (auto& p : generators) {
    if (num_vars < 0) num_vars = p.num_vars();
    if (p.num_vars() != num_vars) throw Error(ErrorKind::DimensionMismatch, "generator arity");
    if (p.is_zero()) continue;
    if (p.degree() > degree_cap) throw CapExceededError(p.degree(), degree_cap);
    g.push_back(p.monic());
  }
  if (g.empty()) throw Error(ErrorKind::InvalidInput, "buchberger needs a nonzero generator");

  std::set<CriticalPair, PairOrder> queue;
  std::set<std::pair<int, int>> pending;
  auto add_pairs_for = [&](int j) {
    for (int i = 0; i < j; ++i) {
      queue.insert({i, j, g[static_cast<std::size_t>(i)].leading_monomial().lcm(
                              g[static_cast<std::size_t>(j)].leading_monomial())});
      pending.insert({i, j});
    }
  };
  for (int j = 1; j < static_cast<int>(g.size()); ++j) add_pairs_for(j);

  while (!queue.empty()) {
    const CriticalPair pair = *queue.begin();
    queue.erase(queue.begin());
    pending.erase({pair.i, pair.j});

    const auto& gi = g[static_cast<std::size_t>(pair.i)];
    const auto& gj = g[static_cast<std::size_t>(pair.j)];
    // Coprime leading monomials: S-polynomial reduces to zero.
    if (pair.lcm == gi.leading_monomial() + gj.leading_monomial()) continue;
    // Chain criterion.
    bool chain = false;
    for (int k = 0; k < static_cast<int>(g.size()) && !chain; ++k) {
      if (k == pair.i || k == pair.j) continue;
      if (!g[static_cast<std::size_t>(k)].leading_monomial().divides(pair.lcm)) continue;
      if (!pending.contains(key(pair.i, k)) && !pending.contains(key(pair.j, k))) chain = true;
    }
    if (chain) continue;

    if (pair.lcm.degree() > degree_cap) throw CapExceededError(pair.lcm.degree(), degree_cap);

    RationalPolynomial r = normal_form(s_polynomial(gi, gj), g);
    if (r.is_zero()) continue;
    g.push_back(r.monic());
    add_pairs_for(static_cast<int>(g.size()) - 1);
  }

  // Minimalize: drop elements whose leading monomial another one divides.
  std::vector<RationalPolynomial> minimal;
  for (std::size_t a = 0; a < g.size(); ++a) {
    bool redundant = false;
    for (std::size_t b = 0; b < g.size() && !redundant; ++b) {
      if (a == b) continue;
      const auto& la = g[a].leading_monomial();
      const auto& lb = g[b].leading_monomial();
      if (lb.divides(la) && (lb != la || b < a)) redundant = true;
    }
    if (!redundant) minimal.push_back(g[a]);
  }
  // Interreduce tails.
  for (std::size_t a = 0; a < minimal.size(); ++a) {
    std::vector<RationalPolynomial> others;
    for (std::size_t b = 0; b < minimal.size(); ++b) {
      if (b != a) others.push_back(minimal[b]);
    }
    const MultiIndex lm = minimal[a].leading_monomial();
    RationalPolynomial tail = minimal[a];
    tail.add_term(lm, -tail.leading_coefficient());
    RationalPolynomial reduced = normal_form(tail, others);
    reduced.add_term(lm, 1);
    minimal[a] = std::move(reduced);
  }
  std::sort(minimal.begin(), minimal.end(), [](const auto& a, const auto& b) {
    return grlex_greater(b.leading_monomial(), a.leading_monomial());
  });

  GroebnerBasis basis;
  basis.elements = std::move(minimal);
  for (const auto& p : basis.elements) basis.max_degree = std::max(basis.max_degree, p.degree());
  return basis;
}

bool is_zero_dimensional(const GroebnerBasis& basis) {
  if (basis.elements.empty()) return false;
  const int m = basis.elements.front().num_vars();
  for (int v = 0; v < m; ++v) {
    bool found = false;
    for (const auto& p : basis.elements) {
      const auto& lm = p.leading_monomial();
      if (lm.degree() == 0 || lm.degree() == lm[v]) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

int ideal_dimension(const GroebnerBasis& basis) {
  if (basis.elements.empty()) throw Error(ErrorKind::InvalidInput, "empty basis");
  const int m = basis.elements.front().num_vars();
  for (const auto& p : basis.elements) {
    if (p.leading_monomial().degree() == 0) return -1;
  }
  if (m > 24) throw Error(ErrorKind::TooManyVariables, "ideal_dimension enumerates subsets");
  int best = 0;
  for (std::uint32_t subset = 0; subset < (1u << m); ++subset) {
    const int size = std::popcount(subset);
    if (size <= best) continue;
    bool contained = true;
    for (const auto& p : basis.elements) {
      const auto& lm = p.leading_monomial();
      bool inside = true;
      for (int v = 0; v < m && inside; ++v) {
        if (lm[v] > 0 && !((subset >> v) & 1u)) inside = false;
      }
      // A generator supported on the subset kills that coordinate subspace.
      if (inside) {
        contained = false;
        break;
      }
    }
    if (contained) best = size;
  }
  return best;
}

// ------------------------------------------------------------ Homogenization

RationalPolynomial homogenize(const RationalPolynomial& f) {
  RationalPolynomial out(f.num_vars() + 1);
  const int d = f.degree();
  for (const auto& [alpha, c] : f.terms()) {
    std::vector<int> e;
    e.reserve(static_cast<std::size_t>(f.num_vars() + 1));
    e.push_back(d - alpha.degree());
    e.insert(e.end(), alpha.exponents().begin(), alpha.exponents().end());
    out.add_term(MultiIndex(std::move(e)), c);
  }
  return out;
}

RationalPolynomial dehomogenize(const RationalPolynomial& f) {
  if (!f.is_homogeneous()) throw Error(ErrorKind::NotHomogeneous, "dehomogenize needs a form");
  if (f.num_vars() < 1) throw Error(ErrorKind::DimensionMismatch, "no x_0 to drop");
  RationalPolynomial out(f.num_vars() - 1);
  for (const auto& [alpha, c] : f.terms()) {
    std::vector<int> e(alpha.exponents().begin() + 1, alpha.exponents().end());
    out.add_term(MultiIndex(std::move(e)), c);
  }
  return out;
}

// ------------------------------------------------------------------- Bounds

Rational degree_bound_report(int n, int d, int r) {
  if (n < 1 || d < 1 || r < 0 || r > n) throw Error(ErrorKind::InvalidInput, "degree bound arguments");
  mpz_class dn;
  mpz_ui_pow_ui(dn.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(n - r));
  const Rational base = Rational(dn) / 2 + d;
  Rational power = 1;
  const unsigned long exponent = 1ul << r;
  for (unsigned long k = 0; k < exponent; ++k) power *= base;
  Rational result = 2 * power;
  result.canonicalize();
  return result;
}

int remainder_degree_bound(int n, int basis_degree) {
  if (n < 1 || basis_degree < 1) throw Error(ErrorKind::InvalidInput, "remainder bound arguments");
  return n * (basis_degree - 1);
}

// ------------------------------------------------------------------ Snapping

Rational snap_value(double value, std::int64_t denominator_cap) {
  if (!std::isfinite(value)) throw Error(ErrorKind::InvalidInput, "cannot snap a non-finite value");
  if (denominator_cap < 1) throw Error(ErrorKind::InvalidInput, "denominator cap must be >= 1");
  const Rational x(value);
  const mpz_class cap(static_cast<long>(denominator_cap));

  // Convergents h/k of the continued fraction of x.
  mpz_class h_prev = 0, k_prev = 1;
  mpz_class h = 1, k = 0;
  mpz_class num = x.get_num();
  mpz_class den = x.get_den();
  while (den != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    const mpz_class h_next = a * h + h_prev;
    const mpz_class k_next = a * k + k_prev;
    if (k_next > cap) {
      // Best semiconvergent with denominator within the cap.
      mpz_class t;
      mpz_fdiv_q(t.get_mpz_t(), mpz_class(cap - k_prev).get_mpz_t(), k.get_mpz_t());
      const Rational convergent(h, k);
      if (t > 0) {
        const Rational semi(t * h + h_prev, t * k + k_prev);
        const Rational semi_err = abs(x - semi);
        const Rational conv_err = abs(x - convergent);
        if (semi_err < conv_err) return Rational(semi);
      }
      Rational out = convergent;
      out.canonicalize();
      return out;
    }
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    const mpz_class rem = num - a * den;
    num = den;
    den = rem;
  }
  Rational out(h, k);
  out.canonicalize();
  return out;
}

SnapResult snap_to_rational(const SparsePolynomial& p, std::int64_t denominator_cap) {
  SnapResult out{RationalPolynomial(p.num_vars()), 0.0};
  for (const auto& [alpha, c] : p.terms()) {
    const Rational q = snap_value(c, denominator_cap);
    out.max_distance = std::max(out.max_distance, std::abs(c - q.get_d()));
    out.polynomial.add_term(alpha, q);
  }
  return out;
}

// -------------------------------------------------------------- KKT ideal

std::vector<RationalPolynomial> kkt_generators(const RationalPolynomial& f0) {
  const int m = f0.num_vars();
  if (f0.is_zero() || !f0.is_homogeneous()) {
    throw Error(ErrorKind::NotHomogeneous, "objective must be a nonzero form");
  }
  if (f0.degree() % 2 != 0) throw Error(ErrorKind::OddDegree, "objective degree must be even");
  std::vector<RationalPolynomial> out;
  RationalPolynomial sphere = RationalPolynomial::constant(m, -1);
  for (int i = 0; i < m; ++i) sphere.add_term(MultiIndex::unit(m, i, 2), 1);
  out.push_back(std::move(sphere));

  std::vector<RationalPolynomial> grad;
  for (int k = 0; k < m; ++k) grad.push_back(partial_derivative(f0, k));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      RationalPolynomial g(m);
      g.subtract_scaled_shifted(grad[static_cast<std::size_t>(i)], -2, MultiIndex::unit(m, j));
      g.subtract_scaled_shifted(grad[static_cast<std::size_t>(j)], 2, MultiIndex::unit(m, i));
      if (!g.is_zero()) out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<RationalPolynomial> homogenized_kkt_generators(const RationalPolynomial& f0) {
  const int m = f0.num_vars();
  const int two_d = f0.degree();
  std::vector<RationalPolynomial> affine = kkt_generators(f0);
  std::vector<RationalPolynomial> out;
  // x_0^{2d-2} (sum x_i^2 - x_0^2)
  RationalPolynomial sphere(m + 1);
  for (int i = 1; i <= m; ++i) {
    std::vector<int> e(static_cast<std::size_t>(m + 1), 0);
    e[0] = two_d - 2;
    e[static_cast<std::size_t>(i)] = 2;
    sphere.add_term(MultiIndex(std::move(e)), 1);
  }
  sphere.add_term(MultiIndex::unit(m + 1, 0, two_d), -1);
  out.push_back(std::move(sphere));
  for (std::size_t k = 1; k < affine.size(); ++k) out.push_back(homogenize(affine[k]));
  return out;
}

}  // namespace sephier
