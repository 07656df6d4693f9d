#include <sstream>

#include <gtest/gtest.h>

#include "sephier/error.hpp"
#include "sephier/sdp.hpp"
#include "support.hpp"

namespace sephier {
namespace {

SdpProblem scalar_problem() {
  SdpProblem p;
  p.block_sizes = {1};
  p.objective = {{0, 0, 0, 1.0}};
  p.add_constraint({{0, 0, 0, 1.0}}, 1.0);
  return p;
}

// min Tr X  s.t.  X12 + X21 = 2
SdpProblem trace_problem() {
  SdpProblem p;
  p.block_sizes = {2};
  p.objective = {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}};
  p.add_constraint({{0, 0, 1, 1.0}}, 2.0);
  return p;
}

double min_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

TEST(Solve, ScalarEquality) {
  const SdpSolution s = solve(scalar_problem());
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.x[0](0, 0), 1.0, 1e-7);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
  EXPECT_NEAR(s.primal_objective - s.dual_objective, 0.0, 1e-6);
}

TEST(Solve, TraceWithOffDiagonalConstraint) {
  const SdpSolution s = solve(trace_problem());
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.primal_objective, 2.0, 1e-6);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 1, 1, 1;
  EXPECT_LT((s.x[0] - expected).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Solve, MaximizeLargestEigenvalue) {
  // max <C, X>  s.t.  Tr X = 1  equals lambda_max(C).
  CounterRng rng(31, 0);
  const Eigen::MatrixXd c = testing::random_symmetric(6, rng);
  SdpProblem p;
  p.block_sizes = {6};
  p.sense = Sense::Maximize;
  append_dense(p.objective, 0, c);
  p.add_constraint([] {
    SparseBlockMatrix id;
    for (int i = 0; i < 6; ++i) id.push_back({0, i, i, 1.0});
    return id;
  }(), 1.0);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues()(5);
  EXPECT_NEAR(s.primal_objective, lmax, 1e-6);
  EXPECT_NEAR(s.dual_objective, lmax, 1e-6);
}

TEST(Solve, RandomFeasibleProblemsMeetTolerances) {
  for (std::uint64_t k = 0; k < 5; ++k) {
    const SdpProblem p = testing::random_feasible_sdp(2024, k);
    const SdpSolution s = solve(p);
    ASSERT_EQ(s.status, SdpStatus::Optimal) << k;
    EXPECT_LE(s.residuals.relative_gap, 1e-6);
    EXPECT_LE(s.residuals.primal_infeasibility, 1e-7);
    EXPECT_LE(s.residuals.dual_infeasibility, 1e-7);
    for (std::size_t b = 0; b < s.x.size(); ++b) {
      EXPECT_GE(min_eig(s.x[b]), -1e-8 * (1.0 + s.x[b].norm()));
      EXPECT_GE(min_eig(s.s[b]), -1e-8 * (1.0 + s.s[b].norm()));
    }
    // Independent residual check against the original data.
    for (int i = 0; i < p.num_constraints(); ++i) {
      const double v = inner_product(p.constraints[static_cast<std::size_t>(i)], s.x);
      EXPECT_LE(std::abs(v - p.rhs[static_cast<std::size_t>(i)]), 1e-7 * (1.0 + std::abs(p.rhs[static_cast<std::size_t>(i)])));
    }
  }
}

TEST(Solve, Deterministic) {
  const SdpProblem p = testing::random_feasible_sdp(77, 3);
  const SdpSolution a = solve(p);
  const SdpSolution b = solve(p);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_EQ(a.dual_objective, b.dual_objective);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.y, b.y);
}

TEST(Solve, GapShrinksAlongTrace) {
  const SdpSolution s = solve(testing::random_feasible_sdp(9, 1));
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  ASSERT_GE(s.trace.size(), 2u);
  EXPECT_LT(s.trace.back().complementarity, s.trace.front().complementarity);
  for (std::size_t i = 1; i < s.trace.size(); ++i) {
    EXPECT_LE(s.trace[i].complementarity, s.trace[i - 1].complementarity * (1.0 + 1e-12));
  }
}

TEST(Presolve, DuplicateRowRemovedSolutionUnchanged) {
  SdpProblem p = trace_problem();
  const SdpSolution base = solve(p);
  p.add_constraint({{0, 0, 1, 1.0}}, 2.0);
  const PresolveResult pr = presolve(p);
  EXPECT_EQ(pr.report.removed_duplicate, 1);
  EXPECT_EQ(pr.problem.num_constraints(), 1);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.primal_objective, base.primal_objective, 1e-7);
  EXPECT_EQ(s.y.size(), 2);
}

TEST(Presolve, ZeroRowDropped) {
  SdpProblem p = scalar_problem();
  p.add_constraint({}, 0.0);
  const PresolveResult pr = presolve(p);
  EXPECT_EQ(pr.report.removed_zero, 1);
  EXPECT_EQ(solve(p).status, SdpStatus::Optimal);
}

TEST(Presolve, InconsistentRows) {
  auto kind_of = [](const SdpProblem& p) {
    try {
      (void)presolve(p);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidInput;
  };
  SdpProblem zero = scalar_problem();
  zero.add_constraint({}, 1.0);
  EXPECT_EQ(kind_of(zero), ErrorKind::InconsistentConstraints);
  SdpProblem dup = scalar_problem();
  dup.add_constraint({{0, 0, 0, 1.0}}, 2.0);
  EXPECT_EQ(kind_of(dup), ErrorKind::InconsistentConstraints);
}

TEST(Presolve, RecoveryReproducesOriginalResiduals) {
  SdpProblem p = testing::random_feasible_sdp(4, 4);
  // Scaled copy of a row: dependent, consistent.
  SparseBlockMatrix scaled = p.constraints[0];
  for (auto& e : scaled) e.value *= 3.0;
  p.add_constraint(scaled, 3.0 * p.rhs[0]);
  const SdpSolution s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  const SdpResiduals r = compute_residuals(p, s.x, s.y, s.s);
  EXPECT_NEAR(r.primal_infeasibility, s.residuals.primal_infeasibility, 1e-10);
  EXPECT_NEAR(r.dual_infeasibility, s.residuals.dual_infeasibility, 1e-10);
  EXPECT_NEAR(r.relative_gap, s.residuals.relative_gap, 1e-10);
}

TEST(Problem, ValidateRejectsOutOfRange) {
  SdpProblem p = scalar_problem();
  p.add_constraint({{0, 1, 1, 1.0}}, 1.0);
  try {
    p.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
}

TEST(Problem, OffDiagonalEntriesCountTwice) {
  const SparseBlockMatrix a = {{0, 0, 1, 1.0}};
  BlockMatrix x{Eigen::MatrixXd::Ones(2, 2)};
  EXPECT_DOUBLE_EQ(inner_product(a, x), 2.0);
  SparseBlockMatrix f;
  add_functional_term(f, 0, 1, 0, 1.0);
  EXPECT_DOUBLE_EQ(inner_product(canonicalize(f), x), 1.0);
}

TEST(TextFormat, ExactRoundTrip) {
  const SdpProblem p = testing::random_feasible_sdp(6, 0);
  std::stringstream ss;
  write_sdp_text(ss, p);
  const SdpProblem q = read_sdp_text(ss);
  EXPECT_EQ(q.block_sizes, p.block_sizes);
  EXPECT_EQ(q.rhs, p.rhs);
  EXPECT_EQ(q.sense, p.sense);
  ASSERT_EQ(q.num_constraints(), p.num_constraints());
  auto same = [](const SparseBlockMatrix& a, const SparseBlockMatrix& b) {
    const auto ca = canonicalize(a), cb = canonicalize(b);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (ca[i].block != cb[i].block || ca[i].row != cb[i].row || ca[i].col != cb[i].col ||
          ca[i].value != cb[i].value)
        return false;
    }
    return true;
  };
  EXPECT_TRUE(same(q.objective, p.objective));
  for (int i = 0; i < p.num_constraints(); ++i)
    EXPECT_TRUE(same(q.constraints[static_cast<std::size_t>(i)], p.constraints[static_cast<std::size_t>(i)]));
}

TEST(TextFormat, RejectsGarbage) {
  std::stringstream ss("not an sdp");
  EXPECT_THROW((void)read_sdp_text(ss), Error);
}

}  // namespace
}  // namespace sephier
