#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "sephier/error.hpp"
#include "sephier/sdp.hpp"

namespace sephier {

SparseBlockMatrix canonicalize(SparseBlockMatrix entries) {
  for (auto& e : entries) {
    if (e.row > e.col) std::swap(e.row, e.col);
  }
  std::sort(entries.begin(), entries.end(), [](const MatrixEntry& a, const MatrixEntry& b) {
    return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
  });
  SparseBlockMatrix out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (!out.empty() && out.back().block == e.block && out.back().row == e.row &&
        out.back().col == e.col) {
      out.back().value += e.value;
    } else {
      out.push_back(e);
    }
  }
  std::erase_if(out, [](const MatrixEntry& e) { return e.value == 0.0; });
  return out;
}

void add_functional_term(SparseBlockMatrix& entries, int block, int row, int col, double coeff) {
  if (row > col) std::swap(row, col);
  entries.push_back({block, row, col, row == col ? coeff : coeff / 2.0});
}

void append_dense(SparseBlockMatrix& entries, int block, const Eigen::MatrixXd& m,
                  double drop_below) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = r; c < m.cols(); ++c) {
      const double v = 0.5 * (m(r, c) + m(c, r));
      if (std::abs(v) > drop_below) {
        entries.push_back({block, static_cast<int>(r), static_cast<int>(c), v});
      }
    }
  }
}

double inner_product(const SparseBlockMatrix& a, const BlockMatrix& x) {
  double sum = 0.0;
  for (const auto& e : a) {
    const double v = x[static_cast<std::size_t>(e.block)](e.row, e.col);
    sum += (e.row == e.col ? 1.0 : 2.0) * e.value * v;
  }
  return sum;
}

double inner_product(const BlockMatrix& a, const BlockMatrix& b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += a[k].cwiseProduct(b[k]).sum();
  return sum;
}

BlockMatrix to_dense(const SparseBlockMatrix& a, const std::vector<int>& block_sizes) {
  BlockMatrix out;
  out.reserve(block_sizes.size());
  for (int n : block_sizes) out.push_back(Eigen::MatrixXd::Zero(n, n));
  for (const auto& e : a) {
    auto& m = out[static_cast<std::size_t>(e.block)];
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return out;
}

double frobenius_norm(const SparseBlockMatrix& a) {
  double s = 0.0;
  for (const auto& e : a) s += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
  return std::sqrt(s);
}

int SdpProblem::add_constraint(SparseBlockMatrix a, double b) {
  constraints.push_back(std::move(a));
  rhs.push_back(b);
  return num_constraints() - 1;
}

void SdpProblem::validate() const {
  if (block_sizes.empty()) throw Error(ErrorKind::ShapeMismatch, "problem has no blocks");
  for (int n : block_sizes) {
    if (n < 1) throw Error(ErrorKind::ShapeMismatch, "block size must be positive");
  }
  if (constraints.size() != rhs.size()) {
    throw Error(ErrorKind::ShapeMismatch, "constraint and rhs counts differ");
  }
  auto check = [this](const SparseBlockMatrix& m) {
    for (const auto& e : m) {
      if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size())) {
        throw Error(ErrorKind::ShapeMismatch, "entry block out of range");
      }
      const int n = block_sizes[static_cast<std::size_t>(e.block)];
      if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) {
        throw Error(ErrorKind::ShapeMismatch, "entry index out of range");
      }
      if (!std::isfinite(e.value)) throw Error(ErrorKind::ShapeMismatch, "non-finite entry");
    }
  };
  check(objective);
  for (const auto& c : constraints) check(c);
}

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::MaxIterations: return "MaxIterations";
    case SdpStatus::NumericalFailure: return "NumericalFailure";
    case SdpStatus::PrimalInfeasibleSuspected: return "PrimalInfeasibleSuspected";
    case SdpStatus::DualInfeasibleSuspected: return "DualInfeasibleSuspected";
  }
  return "Unknown";
}

namespace {

double min_eigenvalue(const BlockMatrix& m) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

}  // namespace

SdpResiduals compute_residuals(const SdpProblem& problem, const BlockMatrix& x,
                               const Eigen::VectorXd& y, const BlockMatrix& s) {
  SdpResiduals r;
  for (int i = 0; i < problem.num_constraints(); ++i) {
    const double b = problem.rhs[static_cast<std::size_t>(i)];
    const double ax = inner_product(problem.constraints[static_cast<std::size_t>(i)], x);
    r.primal_infeasibility = std::max(r.primal_infeasibility, std::abs(ax - b) / (1.0 + std::abs(b)));
  }
  BlockMatrix c = to_dense(problem.objective, problem.block_sizes);
  double cmax = 0.0;
  for (const auto& b : c) cmax = std::max(cmax, b.cwiseAbs().maxCoeff());
  const double sign = problem.sense == Sense::Minimize ? 1.0 : -1.0;
  // min: S = C - sum y A;  max: S = sum y A - C.  Both: sign*(C - sum y A).
  BlockMatrix expected = c;
  for (int i = 0; i < problem.num_constraints(); ++i) {
    for (const auto& e : problem.constraints[static_cast<std::size_t>(i)]) {
      auto& m = expected[static_cast<std::size_t>(e.block)];
      const double v = y(i) * e.value;
      m(e.row, e.col) -= v;
      if (e.row != e.col) m(e.col, e.row) -= v;
    }
  }
  double dres = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    dres = std::max(dres, (sign * expected[k] - s[k]).cwiseAbs().maxCoeff());
  }
  r.dual_infeasibility = dres / (1.0 + cmax);
  const double pobj = inner_product(problem.objective, x);
  double dobj = 0.0;
  for (int i = 0; i < problem.num_constraints(); ++i) dobj += problem.rhs[static_cast<std::size_t>(i)] * y(i);
  r.relative_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  r.min_eig_x = min_eigenvalue(x);
  r.min_eig_s = min_eigenvalue(s);
  return r;
}

// ------------------------------------------------------------------ Presolve

namespace {

using EntryKey = std::tuple<int, int, int>;

std::vector<std::pair<EntryKey, double>> signature(const SparseBlockMatrix& m) {
  std::vector<std::pair<EntryKey, double>> out;
  out.reserve(m.size());
  for (const auto& e : m) out.push_back({{e.block, e.row, e.col}, e.value});
  return out;
}

}  // namespace

PresolveResult presolve(const SdpProblem& problem) {
  problem.validate();
  PresolveResult result;
  PresolveReport& report = result.report;

  std::vector<SparseBlockMatrix> rows;
  std::vector<double> rhs;
  std::vector<int> origin;
  std::map<std::vector<std::pair<EntryKey, double>>, int> seen;
  for (int i = 0; i < problem.num_constraints(); ++i) {
    SparseBlockMatrix a = canonicalize(problem.constraints[static_cast<std::size_t>(i)]);
    const double b = problem.rhs[static_cast<std::size_t>(i)];
    if (a.empty()) {
      if (b != 0.0) {
        throw Error(ErrorKind::InconsistentConstraints,
                    "constraint " + std::to_string(i) + " is zero with nonzero right-hand side");
      }
      ++report.removed_zero;
      continue;
    }
    auto sig = signature(a);
    auto it = seen.find(sig);
    if (it != seen.end()) {
      if (rhs[static_cast<std::size_t>(it->second)] != b) {
        throw Error(ErrorKind::InconsistentConstraints,
                    "constraint " + std::to_string(i) + " duplicates another with different rhs");
      }
      ++report.removed_duplicate;
      continue;
    }
    seen.emplace(std::move(sig), static_cast<int>(rows.size()));
    rows.push_back(std::move(a));
    rhs.push_back(b);
    origin.push_back(i);
  }

  // Linear dependence among the remaining rows, on the packed triangles.
  std::vector<std::size_t> offsets;
  std::size_t dim = 0;
  for (int n : problem.block_sizes) {
    offsets.push_back(dim);
    dim += static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
  }
  auto packed_index = [&](const MatrixEntry& e) {
    const std::size_t n = static_cast<std::size_t>(problem.block_sizes[static_cast<std::size_t>(e.block)]);
    const std::size_t r = static_cast<std::size_t>(e.row);
    const std::size_t c = static_cast<std::size_t>(e.col);
    return offsets[static_cast<std::size_t>(e.block)] + r * n - r * (r - 1) / 2 + (c - r);
  };
  std::vector<double> norms(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) norms[i] = frobenius_norm(rows[i]);

  std::vector<std::size_t> independent(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) independent[i] = i;
  const double work = static_cast<double>(dim) * static_cast<double>(rows.size()) *
                      static_cast<double>(std::min(dim, rows.size()));
  if (!rows.empty() && work < 4e10) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const auto& e : rows[i]) {
        const double w = e.row == e.col ? 1.0 : std::sqrt(2.0);
        v(static_cast<Eigen::Index>(packed_index(e)), static_cast<Eigen::Index>(i)) =
            w * e.value / norms[i];
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    if (rank < static_cast<Eigen::Index>(rows.size())) {
      std::vector<std::size_t> keep;
      for (Eigen::Index k = 0; k < rank; ++k) {
        keep.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(k)));
      }
      std::sort(keep.begin(), keep.end());
      // Consistency of every dropped row with the kept ones.
      Eigen::MatrixXd vk(v.rows(), static_cast<Eigen::Index>(keep.size()));
      Eigen::VectorXd bk(static_cast<Eigen::Index>(keep.size()));
      for (std::size_t k = 0; k < keep.size(); ++k) {
        vk.col(static_cast<Eigen::Index>(k)) = v.col(static_cast<Eigen::Index>(keep[k]));
        bk(static_cast<Eigen::Index>(k)) = rhs[keep[k]] / norms[keep[k]];
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> kept_qr(vk);
      std::vector<bool> is_kept(rows.size(), false);
      for (std::size_t k : keep) is_kept[k] = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (is_kept[i]) continue;
        const Eigen::VectorXd coef = kept_qr.solve(v.col(static_cast<Eigen::Index>(i)));
        const double implied = coef.dot(bk);
        const double actual = rhs[i] / norms[i];
        if (std::abs(implied - actual) > 1e-8 * (1.0 + std::abs(actual))) {
          throw Error(ErrorKind::InconsistentConstraints,
                      "constraint " + std::to_string(origin[i]) +
                          " is a combination of others with a different rhs");
        }
      }
      report.removed_dependent = static_cast<int>(rows.size() - keep.size());
      independent = std::move(keep);
    }
  }

  SdpProblem& reduced = result.problem;
  reduced.block_sizes = problem.block_sizes;
  reduced.sense = problem.sense;
  SparseBlockMatrix c = canonicalize(problem.objective);
  const double cnorm = frobenius_norm(c);
  report.objective_scale = cnorm > 0.0 ? cnorm : 1.0;
  for (auto& e : c) e.value /= report.objective_scale;
  reduced.objective = std::move(c);
  for (std::size_t i : independent) {
    SparseBlockMatrix a = rows[i];
    const double s = norms[i];
    for (auto& e : a) e.value /= s;
    reduced.add_constraint(std::move(a), rhs[i] / s);
    report.kept.push_back(origin[i]);
    report.row_scale.push_back(s);
  }
  return result;
}

SdpSolution recover_solution(const SdpProblem& original, const PresolveReport& report,
                             const SdpSolution& reduced) {
  SdpSolution out;
  out.x = reduced.x;
  out.s = reduced.s;
  for (auto& b : out.s) b *= report.objective_scale;
  out.y = Eigen::VectorXd::Zero(original.num_constraints());
  for (std::size_t k = 0; k < report.kept.size(); ++k) {
    out.y(report.kept[k]) = reduced.y(static_cast<Eigen::Index>(k)) * report.objective_scale /
                            report.row_scale[k];
  }
  out.status = reduced.status;
  out.iterations = reduced.iterations;
  out.trace = reduced.trace;
  for (auto& t : out.trace) {
    t.primal_objective *= report.objective_scale;
    t.dual_objective *= report.objective_scale;
    t.complementarity *= report.objective_scale;
  }
  out.primal_objective = inner_product(original.objective, out.x);
  out.dual_objective = 0.0;
  for (int i = 0; i < original.num_constraints(); ++i) {
    out.dual_objective += original.rhs[static_cast<std::size_t>(i)] * out.y(i);
  }
  out.residuals = compute_residuals(original, out.x, out.y, out.s);
  return out;
}

// --------------------------------------------------------------- Text format

void write_sdp_text(std::ostream& out, const SdpProblem& problem) {
  problem.validate();
  std::ostringstream os;
  os << std::setprecision(17);
  os << "sdp-text 1\n";
  os << "sense " << (problem.sense == Sense::Minimize ? "min" : "max") << '\n';
  os << "blocks " << problem.block_sizes.size() << '\n';
  os << "sizes";
  for (int n : problem.block_sizes) os << ' ' << n;
  os << "\nconstraints " << problem.num_constraints() << '\n';
  os << "rhs";
  for (double b : problem.rhs) os << ' ' << b;
  os << '\n';
  auto emit = [&os](int index, const SparseBlockMatrix& m) {
    for (const auto& e : m) {
      const int r = std::min(e.row, e.col);
      const int c = std::max(e.row, e.col);
      os << index << ' ' << (e.block + 1) << ' ' << (r + 1) << ' ' << (c + 1) << ' ' << e.value
         << '\n';
    }
  };
  emit(0, problem.objective);
  for (int i = 0; i < problem.num_constraints(); ++i) {
    emit(i + 1, problem.constraints[static_cast<std::size_t>(i)]);
  }
  out << os.str();
}

namespace {

std::string next_data_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return line;
  }
  throw Error(ErrorKind::InvalidInput, "unexpected end of SDP text");
}

std::istringstream expect(std::istream& in, const std::string& keyword) {
  std::istringstream ls(next_data_line(in));
  std::string word;
  ls >> word;
  if (word != keyword) throw Error(ErrorKind::InvalidInput, "expected '" + keyword + "', got '" + word + "'");
  return ls;
}

}  // namespace

SdpProblem read_sdp_text(std::istream& in) {
  SdpProblem p;
  {
    auto ls = expect(in, "sdp-text");
    int version = 0;
    ls >> version;
    if (version != 1) throw Error(ErrorKind::InvalidInput, "unsupported sdp-text version");
  }
  {
    auto ls = expect(in, "sense");
    std::string s;
    ls >> s;
    if (s == "min") p.sense = Sense::Minimize;
    else if (s == "max") p.sense = Sense::Maximize;
    else throw Error(ErrorKind::InvalidInput, "sense must be min or max");
  }
  int blocks = 0;
  expect(in, "blocks") >> blocks;
  if (blocks < 1) throw Error(ErrorKind::InvalidInput, "block count");
  {
    auto ls = expect(in, "sizes");
    p.block_sizes.resize(static_cast<std::size_t>(blocks));
    for (auto& n : p.block_sizes) {
      if (!(ls >> n)) throw Error(ErrorKind::InvalidInput, "missing block size");
    }
  }
  int m = 0;
  expect(in, "constraints") >> m;
  if (m < 0) throw Error(ErrorKind::InvalidInput, "constraint count");
  {
    auto ls = expect(in, "rhs");
    p.rhs.resize(static_cast<std::size_t>(m));
    for (auto& b : p.rhs) {
      std::string tok;
      if (!(ls >> tok)) throw Error(ErrorKind::InvalidInput, "missing rhs value");
      b = std::stod(tok);
    }
  }
  p.constraints.assign(static_cast<std::size_t>(m), {});
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    int idx = 0, block = 0, row = 0, col = 0;
    std::string tok;
    if (!(ls >> idx >> block >> row >> col >> tok)) {
      throw Error(ErrorKind::InvalidInput, "malformed entry line: " + line);
    }
    if (idx < 0 || idx > m) throw Error(ErrorKind::InvalidInput, "constraint index out of range");
    MatrixEntry e{block - 1, row - 1, col - 1, std::stod(tok)};
    if (idx == 0) p.objective.push_back(e);
    else p.constraints[static_cast<std::size_t>(idx - 1)].push_back(e);
  }
  p.validate();
  return p;
}

}  // namespace sephier
