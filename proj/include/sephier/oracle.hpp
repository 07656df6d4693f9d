#pragma once

// Ground truth for  max f_0(x)  on the unit sphere: multistart projected
// gradient ascent (lower bounds) and angular-grid enumeration with a
// Lipschitz bracket (two-sided, up to four variables).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sephier/tensor_poly.hpp"

namespace sephier {

struct AscentOptions {
  int max_iterations = 20000;
  double gradient_tolerance = 1e-9;  // on the tangential gradient
  double armijo = 1e-4;
};

struct AscentResult {
  std::vector<double> point;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  // false: iteration cap, best-so-far returned
};

/// Steps along the Euclidean gradient and renormalizes, halving the step
/// until the Armijo test passes and doubling it after every accepted move.
/// The first step is 1 / (2d sum|c|). Errors: NotOnSphere.
AscentResult local_ascend(const SparsePolynomial& f0, std::span<const double> x0, const AscentOptions& opts = {});

enum class OracleMethod { Ascent, Net };

struct OracleResult {
  double best_value = 0.0;
  std::vector<double> best_point;
  double kkt_residual = 0.0;
  int restarts = 0;
  OracleMethod method = OracleMethod::Ascent;
  std::optional<double> certified_upper;  // net only
};

/// Best of `restarts` ascents from normalized Gaussian starts; restart i
/// draws from CounterRng(seed, i).
OracleResult multistart(const SparsePolynomial& f0, int restarts, std::uint64_t seed, const AscentOptions& opts = {});
OracleResult multistart(const SymmetricTensor& m, int restarts, std::uint64_t seed, const AscentOptions& opts = {});

/// Random unit vector from CounterRng(seed, stream).
std::vector<double> random_unit_vector(int dim, std::uint64_t seed, std::uint64_t stream);

struct NetBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> point;
  double lipschitz = 0.0;
  double shift = 0.0;  // c in f_0 - c ||x||^{2d}
  std::size_t points = 0;
};

/// Lipschitz constant 2d * sum |coefficients of f_0 - c ||x||^{2d}|, with c
/// chosen to minimize it (the shift does not change f_0 on the sphere).
double net_lipschitz(const SparsePolynomial& f0, double* shift = nullptr);

/// Hyperspherical angular grid whose points are within delta of every
/// unit vector. Errors: TooManyVariables above four variables,
/// InvalidInput for delta <= 0.
NetBracket net_enumerate(const SparsePolynomial& f0, double delta);
NetBracket net_enumerate(const SymmetricTensor& m, double delta);

}  // namespace sephier
