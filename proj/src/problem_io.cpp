#include "sephier/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "sephier/error.hpp"

namespace sephier {

using nlohmann::json;

namespace {

int require_int(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number_integer()) {
    throw Error(ErrorKind::InvalidInput, std::string("missing integer field '") + key + "'");
  }
  return doc.at(key).get<int>();
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
}

ComplexHermitianOperator parse_complex_hermitian(const json& doc) {
  const int n = require_int(doc, "n");
  const int d = require_int(doc, "d");
  if (n < 1 || d < 1) throw Error(ErrorKind::InvalidInput, "n and d must be positive");
  const int side = checked_power(n, d);
  if (!doc.contains("entries") || !doc.at("entries").is_array()) {
    throw Error(ErrorKind::InvalidInput, "missing 'entries' array");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(side, side);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(side, side);
  for (const auto& e : doc.at("entries")) {
    if (!e.is_array() || e.size() != 4) {
      throw Error(ErrorKind::InvalidInput, "entry must be [row, col, re, im]");
    }
    const int r = e[0].get<int>();
    const int c = e[1].get<int>();
    if (r < 0 || c < 0 || r >= side || c >= side) {
      throw Error(ErrorKind::InvalidInput, "entry index out of range");
    }
    const std::complex<double> v(e[2].get<double>(), e[3].get<double>());
    if (seen(r, c)) throw Error(ErrorKind::InvalidInput, "duplicate entry");
    m(r, c) = v;
    seen(r, c) = 1;
  }
  for (int r = 0; r < side; ++r) {
    for (int c = r; c < side; ++c) {
      if (seen(r, c) && !seen(c, r)) m(c, r) = std::conj(m(r, c));
      if (!seen(r, c) && seen(c, r)) m(r, c) = std::conj(m(c, r));
    }
  }
  return ComplexHermitianOperator(n, d, std::move(m));
}

json complex_hermitian_to_json(const ComplexHermitianOperator& op) {
  json entries = json::array();
  for (int r = 0; r < op.side(); ++r) {
    for (int c = r; c < op.side(); ++c) {
      const auto v = op.matrix()(r, c);
      if (v == std::complex<double>(0.0, 0.0)) continue;
      entries.push_back({r, c, v.real(), v.imag()});
    }
  }
  return {{"type", "complex_hermitian"},
          {"n", op.local_dim()},
          {"d", op.copies()},
          {"entries", std::move(entries)}};
}

json polynomial_terms_to_json(const SparsePolynomial& p) {
  json terms = json::array();
  for (const auto& [alpha, c] : p.terms()) {
    terms.push_back({{"exponents", alpha.exponents()}, {"coeff", c}});
  }
  return terms;
}

SparsePolynomial polynomial_from_terms(const json& terms, int num_vars) {
  if (!terms.is_array()) throw Error(ErrorKind::InvalidInput, "'terms' must be an array");
  SparsePolynomial p(num_vars);
  for (const auto& t : terms) {
    if (!t.contains("exponents") || !t.contains("coeff")) {
      throw Error(ErrorKind::InvalidInput, "term needs 'exponents' and 'coeff'");
    }
    auto exps = t.at("exponents").get<std::vector<int>>();
    if (static_cast<int>(exps.size()) != num_vars) {
      throw Error(ErrorKind::InvalidInput, "exponent vector length differs from vars");
    }
    p.add_term(MultiIndex(std::move(exps)), t.at("coeff").get<double>());
  }
  return p;
}

Problem parse_problem(const json& doc) {
  if (!doc.is_object() || !doc.contains("type")) {
    throw Error(ErrorKind::InvalidInput, "problem needs a 'type' field");
  }
  const std::string type = doc.at("type").get<std::string>();
  Problem problem;
  if (type == "complex_hermitian") {
    problem.kind = Problem::Kind::ComplexHermitian;
    problem.op = parse_complex_hermitian(doc);
    problem.tensor = realify(*problem.op);
    problem.objective = tensor_to_poly(problem.tensor);
    return problem;
  }
  if (type == "real_polynomial") {
    const int vars = require_int(doc, "vars");
    const int degree = require_int(doc, "degree");
    if (vars < 1) throw Error(ErrorKind::InvalidInput, "vars must be positive");
    if (degree < 2 || degree % 2 != 0) {
      throw Error(ErrorKind::OddDegree, "degree must be even and at least 2");
    }
    problem.kind = Problem::Kind::RealPolynomial;
    problem.objective = polynomial_from_terms(doc.at("terms"), vars);
    for (const auto& [alpha, c] : problem.objective.terms()) {
      if (alpha.degree() != degree) {
        throw Error(ErrorKind::NotHomogeneous,
                    "term " + alpha.to_string() + " is not of degree " + std::to_string(degree));
      }
    }
    problem.tensor = poly_to_tensor(problem.objective, degree / 2);
    return problem;
  }
  throw Error(ErrorKind::InvalidInput, "unknown problem type '" + type + "'");
}

Problem load_problem(const std::filesystem::path& path) { return parse_problem(read_json_file(path)); }

}  // namespace sephier
