#include "sephier/witness.hpp"

#include <cmath>
#include <complex>

#include "sephier/dps.hpp"
#include "sephier/error.hpp"

namespace sephier {

Witness witness_from_bound(const ComplexHermitianOperator& m, double nu, int level) {
  const auto side = m.matrix().rows();
  Eigen::MatrixXcd z = nu * Eigen::MatrixXcd::Identity(side, side) - m.matrix();
  return Witness{ComplexHermitianOperator(m.local_dim(), m.copies(), std::move(z)), WitnessOrigin::FromBound,
                 level, 0.0, true};
}

double validate_witness(const ComplexHermitianOperator& z, int level, bool kkt, const SolverOptions& options) {
  const ComplexHermitianOperator neg(z.local_dim(), z.copies(), -z.matrix());
  HierarchyConfig cfg;
  cfg.num_vars = 2 * z.local_dim();
  cfg.half_degree = z.copies();
  cfg.level = level;
  cfg.kkt_enabled = kkt;
  const HierarchyResult res = solve_hierarchy(realify(neg), cfg, options);
  if (res.solution.status != SdpStatus::Optimal) {
    throw Error(ErrorKind::SolverFailure, "witness validation did not converge: " + to_string(res.solution.status));
  }
  return -res.solution.bound;
}

namespace {

// Hermitian basis of dimension dim: off-diagonal real and imaginary
// symmetric pairs, then the diagonal (traceless differences when
// `traceless`).
std::vector<Eigen::MatrixXcd> hermitian_basis(int dim, bool traceless) {
  std::vector<Eigen::MatrixXcd> out;
  const std::complex<double> i1(0.0, 1.0);
  for (int p = 0; p < dim; ++p) {
    for (int q = p + 1; q < dim; ++q) {
      Eigen::MatrixXcd re = Eigen::MatrixXcd::Zero(dim, dim);
      re(p, q) = re(q, p) = 1.0;
      out.push_back(re);
      Eigen::MatrixXcd im = Eigen::MatrixXcd::Zero(dim, dim);
      im(p, q) = -i1;
      im(q, p) = i1;
      out.push_back(im);
    }
  }
  for (int p = 0; p < (traceless ? dim - 1 : dim); ++p) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
    d(p, p) = 1.0;
    if (traceless) d(dim - 1, dim - 1) = -1.0;
    out.push_back(d);
  }
  return out;
}

Eigen::MatrixXcd lift(const Eigen::MatrixXcd& a, int tail) {
  const auto side = a.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(side * tail, side * tail);
  for (Eigen::Index p = 0; p < side; ++p) {
    for (Eigen::Index q = 0; q < side; ++q) {
      for (int t = 0; t < tail; ++t) out(p * tail + t, q * tail + t) = a(p, q);
    }
  }
  return out;
}

Eigen::MatrixXd embed(const Eigen::MatrixXcd& h) {
  // Inputs are built Hermitian; symmetrize away rounding before embedding.
  return complex_to_real_block(0.5 * (h + h.adjoint())).matrix;
}

}  // namespace

WitnessSearchResult dps_witness_search(const ComplexHermitianOperator& rho_target, int level, bool ppt,
                                       const SolverOptions& options) {
  if (rho_target.copies() != 2) throw Error(ErrorKind::InvalidInput, "target must act on n (x) n");
  if (level < 1) throw Error(ErrorKind::InvalidInput, "witness search level must be at least 1");
  const Eigen::MatrixXcd& rho = rho_target.matrix();
  if (std::abs(rho.trace().real() - 1.0) > 1e-8) throw Error(ErrorKind::InvalidInput, "target trace is not 1");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-10) throw Error(ErrorKind::InvalidInput, "target is not positive semidefinite");
  }
  const int n = rho_target.local_dim();
  const int k = level;
  const int systems = k + 1;
  const int big_n = checked_power(n, systems);
  const int dim = n * n;
  const int tail = checked_power(n, k - 1);
  if (2LL * big_n > default_max_moment_side()) {
    throw Error(ErrorKind::SizeOverflow, "extension block too large");
  }

  // Dual form: S_0 = embed(Pi(Z (x) 1 - sum_j T_j(P_j))) >= 0, S_j = embed(P_j) >= 0,
  // Z = 1 + sum z_e B_e. With y = (z, p) this is S = C - sum y_i A_i.
  SdpProblem sdp;
  sdp.sense = Sense::Minimize;
  sdp.block_sizes.assign(ppt ? static_cast<std::size_t>(k + 1) : 1u, 2 * big_n);
  for (int i = 0; i < 2 * big_n; ++i) sdp.objective.push_back({0, i, i, 1.0});

  const auto zbasis = hermitian_basis(dim, true);
  for (const auto& b : zbasis) {
    SparseBlockMatrix row;
    append_dense(row, 0, -embed(twirl_b_systems(lift(b, tail), n, systems)), 1e-15);
    sdp.add_constraint(std::move(row), -(b * rho).trace().real());
  }
  if (ppt) {
    const auto fbasis = hermitian_basis(big_n, false);
    for (int j = 1; j <= k; ++j) {
      std::vector<bool> mask(static_cast<std::size_t>(systems), false);
      for (int t = 1; t <= j; ++t) mask[static_cast<std::size_t>(t)] = true;
      for (const auto& f : fbasis) {
        SparseBlockMatrix row;
        append_dense(row, 0, embed(twirl_b_systems(partial_transpose(f, n, systems, mask), n, systems)), 1e-15);
        append_dense(row, j, -embed(f), 1e-15);
        sdp.add_constraint(std::move(row), 0.0);
      }
    }
  }

  const SdpSolution sol = solve(sdp, options);
  if (sol.status != SdpStatus::Optimal) {
    throw Error(ErrorKind::SolverFailure, "witness search did not converge: " + to_string(sol.status));
  }
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t e = 0; e < zbasis.size(); ++e) z += sol.y(static_cast<Eigen::Index>(e)) * zbasis[e];
  z = 0.5 * (z + z.adjoint()).eval();

  WitnessSearchResult out{Witness{ComplexHermitianOperator(n, 2, z), WitnessOrigin::FromSearch, level, 0.0, false},
                          (z * rho).trace().real(), false, sol.status};
  out.detected = out.value < kDetectionThreshold;
  out.witness.margin = validate_witness(out.witness.z, level, false, options);
  out.witness.valid = out.witness.margin >= -1e-6;
  return out;
}

}  // namespace sephier
