#include <gtest/gtest.h>

#include "sephier/error.hpp"
#include "sephier/groebner.hpp"
#include "support.hpp"

namespace sephier {
namespace {

RationalPolynomial rpoly(int m, std::initializer_list<std::pair<std::vector<int>, Rational>> terms) {
  RationalPolynomial p(m);
  for (const auto& [e, c] : terms) p.add_term(MultiIndex(e), c);
  return p;
}

// The worked KKT ideal of f0 = x1^2.
std::vector<RationalPolynomial> worked_generators() {
  return {rpoly(2, {{{1, 1}, 4}}), rpoly(2, {{{2, 0}, 1}, {{0, 2}, 1}, {{0, 0}, -1}})};
}

std::vector<MultiIndex> leading_monomials(const GroebnerBasis& g) {
  std::vector<MultiIndex> out;
  for (const auto& e : g.elements) out.push_back(e.leading_monomial());
  return out;
}

bool contains(const std::vector<MultiIndex>& v, const MultiIndex& m) {
  return std::find(v.begin(), v.end(), m) != v.end();
}

void expect_groebner_property(const GroebnerBasis& g) {
  for (std::size_t a = 0; a < g.elements.size(); ++a) {
    for (std::size_t b = a + 1; b < g.elements.size(); ++b) {
      EXPECT_TRUE(reduce(s_polynomial(g.elements[a], g.elements[b]), g).remainder.is_zero());
    }
  }
  // Reduced: no leading monomial divides another.
  const auto lms = leading_monomials(g);
  for (std::size_t a = 0; a < lms.size(); ++a)
    for (std::size_t b = 0; b < lms.size(); ++b)
      if (a != b) EXPECT_FALSE(lms[a].divides(lms[b]));
}

void expect_division_identity(const RationalPolynomial& f, const GroebnerBasis& g) {
  const Division div = reduce(f, g);
  ASSERT_EQ(div.quotients.size(), g.elements.size());
  RationalPolynomial rebuilt = div.remainder;
  for (std::size_t i = 0; i < g.elements.size(); ++i) {
    rebuilt += div.quotients[i] * g.elements[i];
    if (!div.quotients[i].is_zero()) {
      EXPECT_LE(div.quotients[i].degree() + g.elements[i].degree(), f.degree());
    }
  }
  EXPECT_EQ(rebuilt, f);
  for (const auto& [mono, c] : div.remainder.terms()) {
    for (const auto& e : g.elements) EXPECT_FALSE(e.leading_monomial().divides(mono));
  }
}

TEST(Buchberger, SingleGenerator) {
  const GroebnerBasis g = buchberger({rpoly(1, {{{2}, 1}, {{0}, -1}})});
  ASSERT_EQ(g.elements.size(), 1u);
  EXPECT_EQ(g.elements[0], rpoly(1, {{{2}, 1}, {{0}, -1}}));
}

TEST(Buchberger, Variables) {
  const GroebnerBasis g = buchberger({rpoly(2, {{{1, 0}, 1}}), rpoly(2, {{{0, 1}, 1}})});
  ASSERT_EQ(g.elements.size(), 2u);
  EXPECT_TRUE(is_zero_dimensional(g));
}

TEST(Buchberger, WorkedKktIdeal) {
  const GroebnerBasis g = buchberger(worked_generators());
  const auto lms = leading_monomials(g);
  EXPECT_EQ(lms.size(), 3u);
  EXPECT_TRUE(contains(lms, MultiIndex({1, 1})));
  EXPECT_TRUE(contains(lms, MultiIndex({2, 0})));
  EXPECT_TRUE(contains(lms, MultiIndex({0, 3})));
  EXPECT_TRUE(std::find(g.elements.begin(), g.elements.end(), rpoly(2, {{{0, 3}, 1}, {{0, 1}, -1}})) !=
              g.elements.end());
  EXPECT_EQ(g.max_degree, 3);
  EXPECT_EQ(g.ordering, "grlex");
  expect_groebner_property(g);
  EXPECT_TRUE(is_zero_dimensional(g));
  EXPECT_EQ(ideal_dimension(g), 0);
}

TEST(Buchberger, WorkedIdealVarietyIsFourPoints) {
  // Every basis element vanishes on (+-1, 0), (0, +-1).
  const GroebnerBasis g = buchberger(worked_generators());
  const std::vector<std::vector<double>> pts{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& e : g.elements)
    for (const auto& p : pts) EXPECT_EQ(e.to_double().evaluate(p), 0.0);
}

TEST(Buchberger, CapExceeded) {
  std::vector<RationalPolynomial> gens{rpoly(2, {{{3, 0}, 1}, {{0, 2}, 1}}), rpoly(2, {{{1, 2}, 1}, {{0, 1}, -1}})};
  try {
    (void)buchberger(gens, 3);
    FAIL() << "expected CapExceeded";
  } catch (const CapExceededError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
    EXPECT_GT(e.degree(), 3);
  }
}

TEST(Buchberger, HomogeneousGeneratorsGiveHomogeneousBasis) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const RationalPolynomial f0 = testing::random_integer_form(3, 4, 5, 700, s);
    if (f0.is_zero()) continue;
    const GroebnerBasis g = buchberger(homogenized_kkt_generators(f0));
    for (const auto& e : g.elements) EXPECT_TRUE(e.is_homogeneous());
  }
}

TEST(Buchberger, RandomKktIdealsSatisfyCriterion) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const RationalPolynomial f0 = testing::random_integer_form(2 + static_cast<int>(s % 2), 4, 5, 800, s);
    expect_groebner_property(buchberger(kkt_generators(f0)));
  }
}

TEST(Reduce, CubeModuloQuadratic) {
  const GroebnerBasis g = buchberger({rpoly(1, {{{2}, 1}, {{0}, -1}})});
  const Division div = reduce(rpoly(1, {{{3}, 1}}), g);
  EXPECT_EQ(div.quotients[0], rpoly(1, {{{1}, 1}}));
  EXPECT_EQ(div.remainder, rpoly(1, {{{1}, 1}}));
  EXPECT_LE(div.remainder.degree(), remainder_degree_bound(1, 2));
}

TEST(Reduce, MembershipGivesZeroRemainder) {
  const GroebnerBasis g = buchberger(worked_generators());
  EXPECT_TRUE(reduce(worked_generators()[1], g).remainder.is_zero());
  EXPECT_TRUE(reduce(worked_generators()[0] * rpoly(2, {{{3, 1}, Rational(2, 7)}}), g).remainder.is_zero());
}

TEST(Reduce, RandomReconstructionIsExact) {
  const GroebnerBasis g = buchberger(worked_generators());
  for (std::uint64_t s = 0; s < 50; ++s) expect_division_identity(testing::random_rational_polynomial(2, 6, 900, s), g);
}

TEST(Reduce, RemainderDegreeBoundOnMonomials) {
  const GroebnerBasis g = buchberger(worked_generators());
  const int bound = remainder_degree_bound(2, g.max_degree);
  EXPECT_EQ(bound, 4);
  for (int deg = 0; deg <= 8; ++deg) {
    for (const auto& alpha : monomials_of_degree(2, deg)) {
      const Division div = reduce(RationalPolynomial::monomial(alpha, 1), g);
      if (!div.remainder.is_zero()) EXPECT_LE(div.remainder.degree(), bound);
    }
  }
}

TEST(ZeroDimensional, LeadingTermTest) {
  GroebnerBasis vars;
  vars.elements = {rpoly(2, {{{1, 0}, 1}}), rpoly(2, {{{0, 1}, 1}})};
  EXPECT_TRUE(is_zero_dimensional(vars));
  GroebnerBasis cross;
  cross.elements = {rpoly(2, {{{1, 1}, 1}})};
  EXPECT_FALSE(is_zero_dimensional(cross));
  EXPECT_EQ(ideal_dimension(cross), 1);
}

TEST(Homogenize, SphereConstraint) {
  const RationalPolynomial f = rpoly(2, {{{2, 0}, 1}, {{0, 2}, 1}, {{0, 0}, -1}});
  EXPECT_EQ(homogenize(f), rpoly(3, {{{0, 2, 0}, 1}, {{0, 0, 2}, 1}, {{2, 0, 0}, -1}}));
}

TEST(Homogenize, HomogeneousInputOnlyGainsVariable) {
  const RationalPolynomial f = rpoly(2, {{{1, 1}, 3}});
  EXPECT_EQ(homogenize(f), rpoly(3, {{{0, 1, 1}, 3}}));
}

TEST(Homogenize, RandomRoundTrip) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const RationalPolynomial f = testing::random_rational_polynomial(3, 4, 1000, s);
    if (f.is_zero()) continue;
    EXPECT_EQ(dehomogenize(homogenize(f)), f);
  }
}

TEST(Homogenize, DehomogenizeRejectsMixedDegree) {
  try {
    (void)dehomogenize(rpoly(2, {{{1, 0}, 1}, {{0, 0}, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHomogeneous);
  }
}

TEST(DegreeBound, FormulaValues) {
  EXPECT_EQ(degree_bound_report(1, 1, 0), Rational(3));
  EXPECT_EQ(degree_bound_report(5, 1, 0), Rational(3));
  EXPECT_EQ(degree_bound_report(2, 2, 0), Rational(8));
  EXPECT_EQ(degree_bound_report(3, 2, 1), Rational(32));
  EXPECT_EQ(remainder_degree_bound(2, 3), 4);
  EXPECT_EQ(remainder_degree_bound(1, 2), 1);
}

TEST(Snap, SimpleFractions) {
  EXPECT_EQ(snap_value(0.5, 10), Rational(1, 2));
  EXPECT_EQ(snap_value(0.333333, 10), Rational(1, 3));
  EXPECT_EQ(snap_value(-2.0, 10), Rational(-2));
}

TEST(Snap, NearestFractionWithinCap) {
  CounterRng rng(55, 0);
  const std::int64_t cap = 1000;
  for (int s = 0; s < 200; ++s) {
    const double v = (rng.uniform() - 0.5) * 20.0;
    const Rational q = snap_value(v, cap);
    EXPECT_LE(q.get_den(), cap);
    // Brute force over every admissible denominator.
    const Rational x(v);
    Rational best_err = abs(x - q);
    for (std::int64_t den = 1; den <= cap; ++den) {
      const Rational scaled = x * Rational(static_cast<long>(den));
      mpz_class lo;
      mpz_fdiv_q(lo.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      for (const mpz_class& num : {lo, mpz_class(lo + 1)}) {
        const Rational err = abs(x - Rational(num, mpz_class(static_cast<long>(den))));
        if (err < best_err) best_err = err;
      }
    }
    EXPECT_EQ(abs(x - q), best_err) << v;
    const long num = static_cast<long>(rng.next() % 2001) - 1000;
    const long den = static_cast<long>(rng.next() % 999) + 1;
    Rational exact(num, den);
    exact.canonicalize();
    EXPECT_EQ(snap_value(exact.get_d(), cap), exact);
  }
}

TEST(Snap, PolynomialReportsDistance) {
  SparsePolynomial p(2);
  p.add_term(MultiIndex({2, 0}), 0.25);
  p.add_term(MultiIndex({0, 2}), 0.1 + 1e-9);
  const SnapResult r = snap_to_rational(p, 100);
  EXPECT_EQ(r.polynomial.coefficient(MultiIndex({2, 0})), Rational(1, 4));
  EXPECT_EQ(r.polynomial.coefficient(MultiIndex({0, 2})), Rational(1, 10));
  EXPECT_NEAR(r.max_distance, 1e-9, 1e-12);
}

TEST(KktGenerators, WorkedExample) {
  const auto gens = kkt_generators(rpoly(2, {{{2, 0}, 1}}));
  ASSERT_EQ(gens.size(), 2u);
  EXPECT_EQ(gens[0], worked_generators()[1]);
  EXPECT_EQ(gens[1], worked_generators()[0]);
}

}  // namespace
}  // namespace sephier
