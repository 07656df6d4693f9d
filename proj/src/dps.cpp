#include "sephier/dps.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sephier/error.hpp"

namespace sephier {

RealBlock complex_to_real_block(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::NotHermitian, "matrix is not square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > ComplexHermitianOperator::kHermitianTolerance) {
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian");
  }
  const auto n = h.rows();
  RealBlock out;
  out.matrix.resize(2 * n, 2 * n);
  out.matrix.topLeftCorner(n, n) = h.real();
  out.matrix.topRightCorner(n, n) = -h.imag();
  out.matrix.bottomLeftCorner(n, n) = h.imag();
  out.matrix.bottomRightCorner(n, n) = h.real();
  return out;
}

Eigen::MatrixXcd real_block_to_complex(const Eigen::MatrixXd& x) {
  const auto n = x.rows() / 2;
  Eigen::MatrixXcd h(n, n);
  h.real() = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  h.imag() = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  return h;
}

int swap_subsystems(int index, int local_dim, int systems, int a, int b) {
  if (a == b) return index;
  std::vector<int> digits(static_cast<std::size_t>(systems));
  for (int pos = systems - 1; pos >= 0; --pos) {
    digits[static_cast<std::size_t>(pos)] = index % local_dim;
    index /= local_dim;
  }
  std::swap(digits[static_cast<std::size_t>(a)], digits[static_cast<std::size_t>(b)]);
  int out = 0;
  for (int d : digits) out = out * local_dim + d;
  return out;
}

Eigen::MatrixXcd permute_subsystems(const Eigen::MatrixXcd& h, int local_dim, int systems, int a, int b) {
  const auto n = h.rows();
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) map[static_cast<std::size_t>(p)] = swap_subsystems(p, local_dim, systems, a, b);
  Eigen::MatrixXcd out(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) out(map[static_cast<std::size_t>(p)], map[static_cast<std::size_t>(q)]) = h(p, q);
  }
  return out;
}

namespace {

// Exchanges the masked digits between row and column index.
std::pair<int, int> transpose_pair(int p, int q, int local_dim, int systems, const std::vector<bool>& mask) {
  int pp = 0, qq = 0, scale = 1;
  for (int pos = systems - 1; pos >= 0; --pos) {
    const int dp = p % local_dim, dq = q % local_dim;
    p /= local_dim;
    q /= local_dim;
    const bool t = mask[static_cast<std::size_t>(pos)];
    pp += (t ? dq : dp) * scale;
    qq += (t ? dp : dq) * scale;
    scale *= local_dim;
  }
  return {pp, qq};
}

}  // namespace

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& h, int local_dim, int systems,
                                   const std::vector<bool>& mask) {
  const auto n = h.rows();
  Eigen::MatrixXcd out(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const auto [pp, qq] = transpose_pair(p, q, local_dim, systems, mask);
      out(p, q) = h(pp, qq);
    }
  }
  return out;
}

Eigen::MatrixXcd twirl_b_systems(const Eigen::MatrixXcd& h, int local_dim, int systems) {
  const auto n = h.rows();
  std::vector<int> perm(static_cast<std::size_t>(systems - 1));
  std::iota(perm.begin(), perm.end(), 1);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
  int count = 0;
  std::vector<int> map(static_cast<std::size_t>(n));
  do {
    for (int p = 0; p < n; ++p) {
      // digit at position perm[j-1] moves to position j
      int rest = p;
      std::vector<int> digits(static_cast<std::size_t>(systems));
      for (int pos = systems - 1; pos >= 0; --pos) {
        digits[static_cast<std::size_t>(pos)] = rest % local_dim;
        rest /= local_dim;
      }
      int out = digits[0];
      for (int j = 1; j < systems; ++j) out = out * local_dim + digits[static_cast<std::size_t>(perm[static_cast<std::size_t>(j - 1)])];
      map[static_cast<std::size_t>(p)] = out;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) acc(map[static_cast<std::size_t>(p)], map[static_cast<std::size_t>(q)]) += h(p, q);
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / static_cast<double>(count);
}

Eigen::MatrixXcd partial_trace_tail(const Eigen::MatrixXcd& h, int local_dim, int systems, int drop) {
  const int keep = checked_power(local_dim, systems - drop);
  const int tail = checked_power(local_dim, drop);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(keep, keep);
  for (int p = 0; p < keep; ++p) {
    for (int q = 0; q < keep; ++q) {
      for (int t = 0; t < tail; ++t) out(p, q) += h(p * tail + t, q * tail + t);
    }
  }
  return out;
}

namespace {

// Linear functionals reading Re rho_pq and Im rho_pq off an embedded block.
void add_re(SparseBlockMatrix& row, int block, int n, int p, int q, double coeff) {
  add_functional_term(row, block, p, q, 0.5 * coeff);
  add_functional_term(row, block, n + p, n + q, 0.5 * coeff);
}

void add_im(SparseBlockMatrix& row, int block, int n, int p, int q, double coeff) {
  add_functional_term(row, block, n + p, q, 0.5 * coeff);
  add_functional_term(row, block, p, n + q, -0.5 * coeff);
}

}  // namespace

DpsProgram build_dps_bipartite(const ComplexHermitianOperator& m, int extensions, bool ppt, int max_side) {
  if (m.copies() != 2) throw Error(ErrorKind::ShapeMismatch, "DPS baseline needs an operator on n (x) n");
  if (extensions < 1) throw Error(ErrorKind::ShapeMismatch, "extensions must be at least 1");
  const int n = m.local_dim();
  const int systems = extensions + 1;
  const int big_n = checked_power(n, systems);
  if (2LL * big_n > max_side) {
    throw Error(ErrorKind::SizeOverflow, "extension block side " + std::to_string(2 * big_n) +
                                             " exceeds the limit " + std::to_string(max_side));
  }
  DpsProgram prog;
  prog.local_dim = n;
  prog.extensions = extensions;
  prog.ppt = ppt;
  prog.joint_dim = big_n;
  SdpProblem& sdp = prog.problem;
  sdp.sense = Sense::Maximize;
  sdp.block_sizes.assign(ppt ? static_cast<std::size_t>(extensions + 1) : 1u, 2 * big_n);

  // Objective 1/2 <embed(M (x) 1), X> = Tr[(M (x) 1) rho].
  const int tail = checked_power(n, extensions - 1);
  const auto side = m.matrix().rows();
  Eigen::MatrixXcd lifted = Eigen::MatrixXcd::Zero(side * tail, side * tail);
  for (Eigen::Index p = 0; p < side; ++p) {
    for (Eigen::Index q = 0; q < side; ++q) {
      for (int t = 0; t < tail; ++t) lifted(p * tail + t, q * tail + t) = m.matrix()(p, q);
    }
  }
  append_dense(sdp.objective, 0, 0.5 * complex_to_real_block(lifted).matrix, 0.0);

  {
    SparseBlockMatrix row;
    for (int p = 0; p < big_n; ++p) add_re(row, 0, big_n, p, p, 1.0);
    sdp.add_constraint(canonicalize(std::move(row)), 1.0);
  }

  for (int j = 2; j <= extensions; ++j) {
    for (int p = 0; p < big_n; ++p) {
      for (int q = p; q < big_n; ++q) {
        const int pp = swap_subsystems(p, n, systems, 1, j);
        const int qq = swap_subsystems(q, n, systems, 1, j);
        SparseBlockMatrix re;
        add_re(re, 0, big_n, p, q, 1.0);
        add_re(re, 0, big_n, pp, qq, -1.0);
        re = canonicalize(std::move(re));
        if (!re.empty()) sdp.add_constraint(std::move(re), 0.0);
        if (p == q) continue;
        SparseBlockMatrix im;
        add_im(im, 0, big_n, p, q, 1.0);
        add_im(im, 0, big_n, pp, qq, -1.0);
        im = canonicalize(std::move(im));
        if (!im.empty()) sdp.add_constraint(std::move(im), 0.0);
      }
    }
  }

  if (ppt) {
    for (int j = 1; j <= extensions; ++j) {
      std::vector<bool> mask(static_cast<std::size_t>(systems), false);
      for (int t = 1; t <= j; ++t) mask[static_cast<std::size_t>(t)] = true;
      for (int p = 0; p < big_n; ++p) {
        for (int q = p; q < big_n; ++q) {
          const auto [pp, qq] = transpose_pair(p, q, n, systems, mask);
          SparseBlockMatrix re;
          add_re(re, j, big_n, p, q, 1.0);
          add_re(re, 0, big_n, pp, qq, -1.0);
          sdp.add_constraint(canonicalize(std::move(re)), 0.0);
          if (p == q) continue;
          SparseBlockMatrix im;
          add_im(im, j, big_n, p, q, 1.0);
          add_im(im, 0, big_n, pp, qq, -1.0);
          sdp.add_constraint(canonicalize(std::move(im)), 0.0);
        }
      }
    }
  }
  return prog;
}

DpsResult solve_dps(const ComplexHermitianOperator& m, int extensions, bool ppt, const SolverOptions& options) {
  const DpsProgram prog = build_dps_bipartite(m, extensions, ppt);
  DpsResult out;
  out.raw = solve(prog.problem, options);
  out.value = out.raw.primal_objective;
  out.bound = out.raw.dual_objective;
  out.status = out.raw.status;
  const Eigen::MatrixXcd rho = real_block_to_complex(out.raw.x.front());
  out.rho_ab = partial_trace_tail(rho, prog.local_dim, extensions + 1, extensions - 1);
  return out;
}

}  // namespace sephier
