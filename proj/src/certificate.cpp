#include <cmath>
#include <map>

#include "sephier/error.hpp"
#include "sephier/kkt.hpp"
#include "sephier/problem_io.hpp"
#include "sephier/relaxation.hpp"

namespace sephier {

using nlohmann::json;

SosCertificate extract_certificate(const MomentProgram& program, const SdpSolution& solution) {
  if (solution.status != SdpStatus::Optimal) {
    throw Error(ErrorKind::DualInfeasible,
                "no certificate from a solve with status " + to_string(solution.status));
  }
  const SdpProblem& sdp = program.problem;
  SosCertificate cert;
  cert.num_vars = program.config.num_vars;
  cert.half_degree = program.config.half_degree;
  cert.level = program.config.level;
  cert.monomials = program.basis;
  cert.nu = solution.y(program.normalization_row);

  Eigen::MatrixXd q = -to_dense(sdp.objective, sdp.block_sizes).front();
  for (int i = 0; i < sdp.num_constraints(); ++i) {
    const double yi = solution.y(i);
    if (yi == 0.0) continue;
    for (const auto& e : sdp.constraints[static_cast<std::size_t>(i)]) {
      q(e.row, e.col) += yi * e.value;
      if (e.row != e.col) q(e.col, e.row) += yi * e.value;
    }
  }
  cert.gram = q;

  if (program.config.kkt_enabled) {
    const int m = program.config.num_vars;
    std::map<std::pair<int, int>, SparsePolynomial> chi;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) chi.emplace(std::make_pair(i, j), SparsePolynomial(m));
    }
    for (const auto& tag : program.kkt_rows) {
      chi.at({tag.i, tag.j}).add_term(tag.alpha, -solution.y(tag.constraint));
    }
    for (auto& [ij, poly] : chi) cert.chi.push_back({ij.first, ij.second, std::move(poly)});
  }
  return cert;
}

double verify_certificate(const SymmetricTensor& m, const SosCertificate& cert) {
  const int mv = cert.num_vars;
  const int d = cert.half_degree;
  const int r = cert.level;
  if (m.num_vars() != mv || m.half_rank() != d || r < 0) {
    throw Error(ErrorKind::ShapeMismatch, "certificate shape disagrees with the objective");
  }
  const auto n = static_cast<Eigen::Index>(cert.monomials.size());
  if (cert.gram.rows() != n || cert.gram.cols() != n) {
    throw Error(ErrorKind::ShapeMismatch, "Gram matrix size differs from the monomial list");
  }
  for (const auto& b : cert.monomials) {
    if (b.num_vars() != mv || b.degree() != d + r) {
      throw Error(ErrorKind::ShapeMismatch, "certificate monomial of the wrong degree");
    }
  }
  const SparsePolynomial f0 = tensor_to_poly(m);
  SparsePolynomial lhs = SparsePolynomial::sphere_power(mv, d + r) * cert.nu;
  lhs -= f0 * SparsePolynomial::sphere_power(mv, r);
  if (!cert.chi.empty()) {
    const KktSystem sys = build_kkt_system(f0, mv);
    for (const auto& mult : cert.chi) {
      if (mult.i < 0 || mult.j < 0 || mult.i >= mv || mult.j >= mv || mult.chi.num_vars() != mv) {
        throw Error(ErrorKind::ShapeMismatch, "multiplier index out of range");
      }
      for (const auto& [alpha, c] : mult.chi.terms()) {
        if (alpha.degree() != 2 * r) throw Error(ErrorKind::ShapeMismatch, "multiplier of the wrong degree");
      }
      lhs -= mult.chi * sys.minor(mult.i, mult.j);
    }
  }
  const SparsePolynomial sigma = gram_polynomial(0.5 * (cert.gram + cert.gram.transpose()), cert.monomials);
  return max_coefficient_difference(lhs, sigma);
}

double min_gram_eigenvalue(const SosCertificate& cert) {
  if (cert.gram.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cert.gram + cert.gram.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

json certificate_to_json(const SosCertificate& cert) {
  json doc;
  doc["format"] = 1;
  doc["nu"] = cert.nu;
  doc["num_vars"] = cert.num_vars;
  doc["half_degree"] = cert.half_degree;
  doc["level"] = cert.level;
  json monomials = json::array();
  for (const auto& b : cert.monomials) monomials.push_back(b.exponents());
  doc["monomials"] = std::move(monomials);
  json lower = json::array();
  for (Eigen::Index i = 0; i < cert.gram.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) lower.push_back(cert.gram(i, j));
  }
  doc["Q_lower_triangle"] = std::move(lower);
  json chi = json::array();
  for (const auto& m : cert.chi) {
    chi.push_back({{"i", m.i}, {"j", m.j}, {"terms", polynomial_terms_to_json(m.chi)}});
  }
  doc["chi"] = std::move(chi);
  return doc;
}

SosCertificate certificate_from_json(const json& doc) {
  try {
    SosCertificate cert;
    if (doc.contains("format") && doc.at("format").get<int>() != 1) {
      throw Error(ErrorKind::InvalidInput, "unsupported certificate format");
    }
    cert.nu = doc.at("nu").get<double>();
    cert.num_vars = doc.at("num_vars").get<int>();
    cert.half_degree = doc.at("half_degree").get<int>();
    cert.level = doc.at("level").get<int>();
    for (const auto& e : doc.at("monomials")) {
      auto exps = e.get<std::vector<int>>();
      if (static_cast<int>(exps.size()) != cert.num_vars) {
        throw Error(ErrorKind::ShapeMismatch, "monomial length differs from num_vars");
      }
      cert.monomials.emplace_back(std::move(exps));
    }
    const auto n = static_cast<Eigen::Index>(cert.monomials.size());
    const auto& lower = doc.at("Q_lower_triangle");
    if (static_cast<Eigen::Index>(lower.size()) != n * (n + 1) / 2) {
      throw Error(ErrorKind::ShapeMismatch, "Q_lower_triangle length");
    }
    cert.gram = Eigen::MatrixXd::Zero(n, n);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double v = lower.at(k++).get<double>();
        cert.gram(i, j) = v;
        cert.gram(j, i) = v;
      }
    }
    for (const auto& c : doc.at("chi")) {
      cert.chi.push_back({c.at("i").get<int>(), c.at("j").get<int>(),
                          polynomial_from_terms(c.at("terms"), cert.num_vars)});
    }
    return cert;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace sephier
