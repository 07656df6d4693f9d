#pragma once

// JSON problem files:
//   {"type":"complex_hermitian","n":2,"d":2,"entries":[[row,col,re,im],...]}
//   {"type":"real_polynomial","vars":3,"degree":4,"terms":[{"exponents":[...],"coeff":1.5},...]}
// For complex_hermitian only the upper triangle is required; a lower entry,
// if given, must agree with the conjugate of its mirror.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "sephier/tensor_poly.hpp"

namespace sephier {

struct Problem {
  enum class Kind { ComplexHermitian, RealPolynomial };

  Kind kind = Kind::RealPolynomial;
  std::optional<ComplexHermitianOperator> op;  // set for ComplexHermitian
  SymmetricTensor tensor{1, 0};                // realified or direct objective
  SparsePolynomial objective;                  // f_0, homogeneous of degree 2d

  int num_vars() const { return tensor.num_vars(); }
  int half_degree() const { return tensor.half_rank(); }
};

Problem parse_problem(const nlohmann::json& doc);
Problem load_problem(const std::filesystem::path& path);

ComplexHermitianOperator parse_complex_hermitian(const nlohmann::json& doc);
nlohmann::json complex_hermitian_to_json(const ComplexHermitianOperator& op);

nlohmann::json polynomial_terms_to_json(const SparsePolynomial& p);
SparsePolynomial polynomial_from_terms(const nlohmann::json& terms, int num_vars);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace sephier
