// Infeasible-start primal-dual path following, HKM direction with a
// Mehrotra predictor-corrector. The core always works on the minimization
// form; a maximization problem is handled by negating C and y.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "sephier/error.hpp"
#include "sephier/sdp.hpp"

namespace sephier {
namespace {

struct FullEntry {
  int r;
  int c;
  double v;
};

struct BlockPart {
  int block = 0;
  std::vector<FullEntry> entries;  // both triangles
  bool dense = false;
  Eigen::MatrixXd mat;
};

struct Scales {
  const std::vector<double>* row_scale = nullptr;
  double objective_scale = 1.0;
  double row(int i) const { return row_scale ? (*row_scale)[static_cast<std::size_t>(i)] : 1.0; }
};

struct Metrics {
  double pinf = 0.0;
  double dinf = 0.0;
  double gap = 0.0;
  double pobj = 0.0;  // original units, minimization form
  double dobj = 0.0;
};

class Core {
 public:
  Core(const SdpProblem& p, const SolverOptions& opt, Scales scales)
      : p_(p), opt_(opt), scales_(scales), m_(p.num_constraints()) {
    sizes_ = p.block_sizes;
    c_ = to_dense(p.objective, sizes_);
    if (p.sense == Sense::Maximize) {
      for (auto& b : c_) b = -b;
    }
    cmax_ = 0.0;
    for (const auto& b : c_) cmax_ = std::max(cmax_, b.cwiseAbs().maxCoeff());
    by_block_.assign(sizes_.size(), {});
    parts_.resize(static_cast<std::size_t>(m_));
    b_ = Eigen::VectorXd(m_);
    for (int i = 0; i < m_; ++i) {
      b_(i) = p.rhs[static_cast<std::size_t>(i)];
      auto& parts = parts_[static_cast<std::size_t>(i)];
      for (const auto& e : canonicalize(p.constraints[static_cast<std::size_t>(i)])) {
        if (parts.empty() || parts.back().block != e.block) {
          parts.push_back(BlockPart{});
          parts.back().block = e.block;
        }
        parts.back().entries.push_back({e.row, e.col, e.value});
        if (e.row != e.col) parts.back().entries.push_back({e.col, e.row, e.value});
      }
      for (std::size_t k = 0; k < parts.size(); ++k) {
        auto& part = parts[k];
        const int n = sizes_[static_cast<std::size_t>(part.block)];
        // Rank-one updates cost nnz * n^2; two dense products cost ~2 n^3.
        if (static_cast<double>(part.entries.size()) > 2.0 * n) {
          part.dense = true;
          part.mat = Eigen::MatrixXd::Zero(n, n);
          for (const auto& e : part.entries) part.mat(e.r, e.c) = e.v;
        }
        by_block_[static_cast<std::size_t>(part.block)].push_back({i, static_cast<int>(k)});
      }
    }
  }

  SdpSolution run();

 private:
  Eigen::VectorXd apply_a(const BlockMatrix& z) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (const auto& part : parts_[static_cast<std::size_t>(i)]) {
        const auto& zb = z[static_cast<std::size_t>(part.block)];
        for (const auto& e : part.entries) s += e.v * zb(e.r, e.c);
      }
      out(i) = s;
    }
    return out;
  }

  BlockMatrix apply_at(const Eigen::VectorXd& y) const {
    BlockMatrix out = zeros();
    for (int i = 0; i < m_; ++i) {
      if (y(i) == 0.0) continue;
      for (const auto& part : parts_[static_cast<std::size_t>(i)]) {
        auto& ob = out[static_cast<std::size_t>(part.block)];
        for (const auto& e : part.entries) ob(e.r, e.c) += y(i) * e.v;
      }
    }
    return out;
  }

  BlockMatrix zeros() const {
    BlockMatrix out;
    for (int n : sizes_) out.push_back(Eigen::MatrixXd::Zero(n, n));
    return out;
  }

  Eigen::MatrixXd schur(const BlockMatrix& x, const BlockMatrix& sinv) const {
    Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(m_, m_);
    for (std::size_t blk = 0; blk < sizes_.size(); ++blk) {
      const auto& list = by_block_[blk];
      const auto& xb = x[blk];
      const auto& zb = sinv[blk];
      const int n = sizes_[blk];
      Eigen::MatrixXd w(n, n);
      for (std::size_t jj = 0; jj < list.size(); ++jj) {
        const auto& pj = parts_[static_cast<std::size_t>(list[jj].first)][static_cast<std::size_t>(list[jj].second)];
        if (pj.dense) {
          w.noalias() = xb * (pj.mat * zb);
        } else {
          w.setZero();
          for (const auto& e : pj.entries) w.noalias() += e.v * xb.col(e.r) * zb.row(e.c);
        }
        const int j = list[jj].first;
        for (std::size_t ii = jj; ii < list.size(); ++ii) {
          const auto& pi = parts_[static_cast<std::size_t>(list[ii].first)][static_cast<std::size_t>(list[ii].second)];
          double s = 0.0;
          if (pi.dense) s = pi.mat.cwiseProduct(w).sum();
          else for (const auto& e : pi.entries) s += e.v * w(e.r, e.c);
          mm(list[ii].first, j) += s;
        }
      }
    }
    mm.triangularView<Eigen::StrictlyUpper>() = mm.transpose().triangularView<Eigen::StrictlyUpper>();
    return mm;
  }

  Metrics metrics(const BlockMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& rp,
                  const BlockMatrix& rd) const {
    Metrics mt;
    for (int i = 0; i < m_; ++i) {
      const double s = scales_.row(i);
      mt.pinf = std::max(mt.pinf, s * std::abs(rp(i)) / (1.0 + s * std::abs(b_(i))));
    }
    double rdmax = 0.0;
    for (const auto& b : rd) rdmax = std::max(rdmax, b.cwiseAbs().maxCoeff());
    const double os = scales_.objective_scale;
    mt.dinf = os * rdmax / (1.0 + os * cmax_);
    mt.pobj = os * inner_product(c_, x);
    mt.dobj = os * b_.dot(y);
    mt.gap = std::abs(mt.pobj - mt.dobj) / (1.0 + std::abs(mt.pobj) + std::abs(mt.dobj));
    return mt;
  }

  // Largest alpha in (0, 1] keeping m + alpha d positive definite, times the
  // step fraction when the boundary is within reach.
  std::optional<double> step_length(const BlockMatrix& m, const BlockMatrix& d) const {
    double alpha = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      Eigen::LLT<Eigen::MatrixXd> llt(m[k]);
      if (llt.info() != Eigen::Success) return std::nullopt;
      Eigen::MatrixXd t = llt.matrixL().solve(d[k]);
      t = llt.matrixL().solve(t.transpose()).transpose();
      t = 0.5 * (t + t.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues()(0);
      if (lo < 0.0) alpha = std::min(alpha, opt_.step_fraction * (-1.0 / lo));
    }
    return alpha;
  }

  const SdpProblem& p_;
  const SolverOptions& opt_;
  Scales scales_;
  int m_;
  std::vector<int> sizes_;
  BlockMatrix c_;
  double cmax_ = 0.0;
  Eigen::VectorXd b_;
  std::vector<std::vector<BlockPart>> parts_;
  std::vector<std::vector<std::pair<int, int>>> by_block_;
};

void axpy(BlockMatrix& y, double a, const BlockMatrix& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

SdpSolution Core::run() {
  const double feas_tol = opt_.feasibility_tolerance;
  const double gap_tol = opt_.gap_tolerance;
  const double feas_target = opt_.target_feasibility > 0.0 ? std::min(opt_.target_feasibility, feas_tol) : feas_tol;
  const double gap_target = opt_.target_gap > 0.0 ? std::min(opt_.target_gap, gap_tol) : gap_tol;

  int total_n = 0;
  for (int n : sizes_) total_n += n;

  // Starting point as in SDPT3.
  BlockMatrix x = zeros(), s = zeros();
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    const double n = sizes_[k];
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max(10.0, std::sqrt(n));
    eta = std::max(eta, 1.0 + c_[k].norm());
    for (int i = 0; i < m_; ++i) {
      for (const auto& part : parts_[static_cast<std::size_t>(i)]) {
        if (part.block != static_cast<int>(k)) continue;
        double fn = 0.0;
        for (const auto& e : part.entries) fn += e.v * e.v;
        fn = std::sqrt(fn);
        xi = std::max(xi, n * (1.0 + std::abs(b_(i))) / (1.0 + fn));
        eta = std::max(eta, 1.0 + fn);
      }
    }
    x[k].diagonal().setConstant(xi);
    s[k].diagonal().setConstant(eta);
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);

  SdpSolution sol;
  std::optional<SdpSolution> best;
  double best_score = std::numeric_limits<double>::infinity();
  SdpStatus status = SdpStatus::MaxIterations;
  bool converged = false;
  int stalls = 0;
  int it = 0;

  auto snapshot = [&](SdpStatus st) {
    SdpSolution out;
    out.x = x;
    out.s = s;
    out.y = y;
    out.status = st;
    out.iterations = it;
    return out;
  };

  for (it = 0; it <= opt_.max_iterations; ++it) {
    const Eigen::VectorXd rp = b_ - apply_a(x);
    BlockMatrix rd = c_;
    {
      const BlockMatrix aty = apply_at(y);
      for (std::size_t k = 0; k < rd.size(); ++k) rd[k] -= s[k] + aty[k];
    }
    const Metrics mt = metrics(x, y, rp, rd);
    const double xs = inner_product(x, s);
    const double mu = xs / total_n;

    IterationLog log;
    log.iteration = it;
    log.primal_objective = mt.pobj;
    log.dual_objective = mt.dobj;
    log.complementarity = xs;
    log.primal_infeasibility = mt.pinf;
    log.dual_infeasibility = mt.dinf;
    if (!sol.trace.empty()) {
      log.primal_step = sol.trace.back().primal_step;
      log.dual_step = sol.trace.back().dual_step;
    }
    if (opt_.verbosity > 0) {
      std::fprintf(stderr, "%4d pobj % .10e dobj % .10e pinf %.2e dinf %.2e gap %.2e mu %.2e\n", it,
                   mt.pobj, mt.dobj, mt.pinf, mt.dinf, mt.gap, mu);
    }

    const double score = std::max({mt.pinf / feas_tol, mt.dinf / feas_tol, mt.gap / gap_tol});
    if (score < best_score && score <= 1.0) {
      best_score = score;
      best = snapshot(SdpStatus::Optimal);
    }
    if (mt.pinf <= feas_target && mt.dinf <= feas_target && mt.gap <= gap_target) {
      converged = true;
      status = SdpStatus::Optimal;
      sol.trace.push_back(log);
      break;
    }
    if (it == opt_.max_iterations) {
      sol.trace.push_back(log);
      break;
    }
    const double dobj_red = b_.dot(y);
    const double pobj_red = inner_product(c_, x);
    if (dobj_red > 1e12 && mt.dinf <= feas_tol) {
      status = SdpStatus::PrimalInfeasibleSuspected;
      sol.trace.push_back(log);
      break;
    }
    if (pobj_red < -1e12 && mt.pinf <= feas_tol) {
      status = SdpStatus::DualInfeasibleSuspected;
      sol.trace.push_back(log);
      break;
    }

    BlockMatrix sinv;
    bool ok = true;
    for (const auto& sb : s) {
      Eigen::LLT<Eigen::MatrixXd> llt(sb);
      if (llt.info() != Eigen::Success) { ok = false; break; }
      Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(sb.rows(), sb.cols()));
      sinv.push_back(0.5 * (inv + inv.transpose()));
    }
    if (!ok) {
      status = SdpStatus::NumericalFailure;
      sol.trace.push_back(log);
      break;
    }

    Eigen::MatrixXd mm = schur(x, sinv);
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    Eigen::LLT<Eigen::MatrixXd> llt;
    bool use_llt = true;
    llt.compute(mm);
    if (llt.info() != Eigen::Success) {
      const double reg = 1e-13 * std::max(1.0, mm.diagonal().cwiseAbs().maxCoeff());
      mm.diagonal().array() += reg;
      llt.compute(mm);
      if (llt.info() != Eigen::Success) {
        use_llt = false;
        ldlt.compute(mm);
        if (ldlt.info() != Eigen::Success) {
          status = SdpStatus::NumericalFailure;
          sol.trace.push_back(log);
          break;
        }
      }
    }
    auto solve_m = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
      return use_llt ? Eigen::VectorXd(llt.solve(r)) : Eigen::VectorXd(ldlt.solve(r));
    };

    // X Rd S^{-1} is shared by predictor and corrector.
    BlockMatrix xrdz(sizes_.size());
    for (std::size_t k = 0; k < sizes_.size(); ++k) xrdz[k] = x[k] * rd[k] * sinv[k];
    const Eigen::VectorXd a_xrdz = apply_a(xrdz);

    auto direction = [&](const BlockMatrix& r, BlockMatrix& dx, Eigen::VectorXd& dy, BlockMatrix& ds) {
      dy = solve_m(rp - apply_a(r) + a_xrdz);
      ds = rd;
      axpy(ds, -1.0, apply_at(dy));
      dx = r;
      for (std::size_t k = 0; k < sizes_.size(); ++k) {
        const Eigen::MatrixXd t = x[k] * ds[k] * sinv[k];
        dx[k] -= 0.5 * (t + t.transpose());
      }
    };

    // Predictor.
    BlockMatrix r = x;
    for (auto& b : r) b = -b;
    BlockMatrix dxa, dsa;
    Eigen::VectorXd dya;
    direction(r, dxa, dya, dsa);
    const auto ap_a = step_length(x, dxa);
    const auto ad_a = step_length(s, dsa);
    if (!ap_a || !ad_a) {
      status = SdpStatus::NumericalFailure;
      sol.trace.push_back(log);
      break;
    }
    BlockMatrix xa = x, sa = s;
    axpy(xa, *ap_a, dxa);
    axpy(sa, *ad_a, dsa);
    const double mu_aff = inner_product(xa, sa) / total_n;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
      const Eigen::MatrixXd t = dxa[k] * dsa[k] * sinv[k];
      r[k] = sigma * mu * sinv[k] - x[k] - 0.5 * (t + t.transpose());
    }
    BlockMatrix dx, ds;
    Eigen::VectorXd dy;
    direction(r, dx, dy, ds);
    auto ap = step_length(x, dx);
    auto ad = step_length(s, ds);
    if (!ap || !ad) {
      status = SdpStatus::NumericalFailure;
      sol.trace.push_back(log);
      break;
    }
    double alpha_p = *ap, alpha_d = *ad;

    // Keep <X, S> from growing.
    for (int back = 0; back < 8; ++back) {
      BlockMatrix xn = x, sn = s;
      axpy(xn, alpha_p, dx);
      axpy(sn, alpha_d, ds);
      if (inner_product(xn, sn) <= xs) break;
      alpha_p *= 0.5;
      alpha_d *= 0.5;
    }

    axpy(x, alpha_p, dx);
    axpy(s, alpha_d, ds);
    for (auto& b : x) b = 0.5 * (b + b.transpose()).eval();
    for (auto& b : s) b = 0.5 * (b + b.transpose()).eval();
    y += alpha_d * dy;
    log.primal_step = alpha_p;
    log.dual_step = alpha_d;
    sol.trace.push_back(log);

    if (std::max(alpha_p, alpha_d) < 1e-8) {
      if (++stalls >= 3) {
        status = SdpStatus::NumericalFailure;
        ++it;
        break;
      }
    } else {
      stalls = 0;
    }
  }

  SdpSolution out;
  if (!converged && best) {
    out = *best;
  } else {
    out = snapshot(status);
  }
  out.iterations = std::min(it, opt_.max_iterations);
  out.trace = std::move(sol.trace);
  if (p_.sense == Sense::Maximize) out.y = -out.y;
  out.primal_objective = inner_product(p_.objective, out.x);
  out.dual_objective = 0.0;
  for (int i = 0; i < m_; ++i) out.dual_objective += b_(i) * out.y(i);
  if (p_.sense == Sense::Maximize) {
    for (auto& t : out.trace) {
      t.primal_objective = -t.primal_objective;
      t.dual_objective = -t.dual_objective;
    }
  }
  // Trace objectives were already in original units; undo the scale that
  // recover_solution applies.
  for (auto& t : out.trace) {
    t.primal_objective /= scales_.objective_scale;
    t.dual_objective /= scales_.objective_scale;
  }
  return out;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options) {
  problem.validate();
  PresolveResult pre;
  if (options.presolve) {
    pre = presolve(problem);
  } else {
    pre.problem = problem;
    pre.problem.objective = canonicalize(problem.objective);
    for (auto& c : pre.problem.constraints) c = canonicalize(c);
    for (int i = 0; i < problem.num_constraints(); ++i) {
      pre.report.kept.push_back(i);
      pre.report.row_scale.push_back(1.0);
    }
  }
  Core core(pre.problem, options, Scales{&pre.report.row_scale, pre.report.objective_scale});
  const SdpSolution reduced = core.run();
  return recover_solution(problem, pre.report, reduced);
}

}  // namespace sephier
