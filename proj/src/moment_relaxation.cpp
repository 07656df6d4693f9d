#include <cstdlib>
#include <map>
#include <string>

#include "sephier/error.hpp"
#include "sephier/kkt.hpp"
#include "sephier/relaxation.hpp"

namespace sephier {

int default_max_moment_side() {
  if (const char* env = std::getenv("SEPHIER_MAX_MOMENT_SIDE")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1'000'000) return static_cast<int>(v);
  }
  return 3000;
}

std::uint64_t HierarchyConfig::moment_side() const {
  return monomial_count(num_vars, half_degree + level);
}

namespace {

// gamma -> unordered pairs (i <= j) of basis positions summing to gamma.
using PairIndex = std::map<MultiIndex, std::vector<std::pair<int, int>>, GrlexGreater>;

PairIndex build_pair_index(const std::vector<MultiIndex>& basis) {
  PairIndex index;
  const int n = static_cast<int>(basis.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      index[basis[static_cast<std::size_t>(i)] + basis[static_cast<std::size_t>(j)]].push_back({i, j});
    }
  }
  return index;
}

SparseBlockMatrix gram_functional(const SparsePolynomial& p, const PairIndex& index, int block) {
  SparseBlockMatrix out;
  for (const auto& [gamma, c] : p.terms()) {
    auto it = index.find(gamma);
    if (it == index.end()) {
      throw Error(ErrorKind::ShapeMismatch, "term " + gamma.to_string() + " outside the moment basis");
    }
    int ordered = 0;
    for (const auto& [i, j] : it->second) ordered += i == j ? 1 : 2;
    const double share = c / ordered;
    for (const auto& [i, j] : it->second) {
      add_functional_term(out, block, i, j, (i == j ? 1.0 : 2.0) * share);
    }
  }
  return canonicalize(std::move(out));
}

}  // namespace

SparseBlockMatrix gram_functional(const SparsePolynomial& p, const std::vector<MultiIndex>& basis,
                                  int block) {
  return gram_functional(p, build_pair_index(basis), block);
}

SparsePolynomial gram_polynomial(const Eigen::MatrixXd& q, const std::vector<MultiIndex>& basis) {
  const int n = static_cast<int>(basis.size());
  if (q.rows() != n || q.cols() != n) throw Error(ErrorKind::ShapeMismatch, "Gram matrix size");
  const int vars = n > 0 ? basis.front().num_vars() : 0;
  std::map<MultiIndex, double, GrlexGreater> acc;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = q(i, j);
      if (v != 0.0) acc[basis[static_cast<std::size_t>(i)] + basis[static_cast<std::size_t>(j)]] += v;
    }
  }
  SparsePolynomial p(vars);
  for (const auto& [alpha, c] : acc) p.add_term(alpha, c);
  return p;
}

MomentProgram build_moment_sdp(const SymmetricTensor& m, const HierarchyConfig& cfg) {
  if (cfg.num_vars < 1 || cfg.half_degree < 1 || cfg.level < 0) {
    throw Error(ErrorKind::ShapeMismatch, "hierarchy needs num_vars >= 1, half_degree >= 1, level >= 0");
  }
  if (m.num_vars() != cfg.num_vars || m.half_rank() != cfg.half_degree) {
    throw Error(ErrorKind::ShapeMismatch, "tensor shape disagrees with the hierarchy config");
  }
  const std::uint64_t side = cfg.moment_side();
  if (side > static_cast<std::uint64_t>(cfg.max_moment_side)) {
    throw Error(ErrorKind::SizeOverflow, "moment matrix side " + std::to_string(side) +
                                             " exceeds the limit " + std::to_string(cfg.max_moment_side));
  }

  MomentProgram prog;
  prog.config = cfg;
  prog.objective = tensor_to_poly(m);
  prog.basis = monomials_of_degree(cfg.num_vars, cfg.half_degree + cfg.level);
  const PairIndex index = build_pair_index(prog.basis);
  SdpProblem& sdp = prog.problem;
  sdp.block_sizes = {static_cast<int>(side)};
  sdp.sense = Sense::Maximize;

  const int mv = cfg.num_vars;
  SparsePolynomial objective = prog.objective;
  if (cfg.level > 0) objective = objective * SparsePolynomial::sphere_power(mv, cfg.level);
  sdp.objective = gram_functional(objective, index, 0);

  prog.normalization_row =
      sdp.add_constraint(gram_functional(SparsePolynomial::sphere_power(mv, cfg.half_degree + cfg.level), index, 0), 1.0);

  // Moment coordinates: entries with equal monomial sums agree.
  for (const auto& [gamma, pairs] : index) {
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      SparseBlockMatrix row;
      add_functional_term(row, 0, pairs[0].first, pairs[0].second, 1.0);
      add_functional_term(row, 0, pairs[k].first, pairs[k].second, -1.0);
      sdp.add_constraint(canonicalize(std::move(row)), 0.0);
    }
  }

  if (cfg.kkt_enabled) {
    const KktSystem sys = build_kkt_system(prog.objective, mv);
    for (const auto& alpha : monomials_of_degree(mv, 2 * cfg.level)) {
      const SparsePolynomial shift = SparsePolynomial::monomial(alpha, 1.0);
      for (const auto& minor : sys.minors()) {
        if (minor.polynomial.is_zero()) continue;
        SparseBlockMatrix row = gram_functional(shift * minor.polynomial, index, 0);
        if (row.empty()) continue;
        const int c = sdp.add_constraint(std::move(row), 0.0);
        prog.kkt_rows.push_back(KktRowTag{c, alpha, minor.i, minor.j});
      }
    }
  }
  return prog;
}

SolverOptions hierarchy_solver_options() {
  SolverOptions o;
  o.target_feasibility = 1e-10;
  o.target_gap = 1e-10;
  return o;
}

MomentSolution solve_moment(const MomentProgram& program, const SolverOptions& options) {
  MomentSolution out;
  out.raw = solve(program.problem, options);
  out.rho = out.raw.x.front();
  out.objective = out.raw.primal_objective;
  out.bound = out.raw.dual_objective;
  out.status = out.raw.status;
  out.residuals = out.raw.residuals;
  return out;
}

HierarchyResult solve_hierarchy(const SymmetricTensor& m, const HierarchyConfig& cfg,
                                const SolverOptions& options) {
  HierarchyResult result;
  result.program = build_moment_sdp(m, cfg);
  result.solution = solve_moment(result.program, options);
  if (result.solution.status == SdpStatus::Optimal) {
    result.certificate = extract_certificate(result.program, result.solution.raw);
  }
  return result;
}

}  // namespace sephier
