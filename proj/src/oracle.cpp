#include "sephier/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sephier/error.hpp"
#include "sephier/kkt.hpp"
#include "sephier/random.hpp"

namespace sephier {

namespace {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void normalize(std::vector<double>& x) {
  const double n = norm(x);
  for (double& v : x) v /= n;
}

// Squared norm of the gradient projected onto the tangent space at x.
double tangential_norm2(const std::vector<double>& g, const std::vector<double>& x) {
  double radial = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) radial += g[i] * x[i];
  double t2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g[i] - radial * x[i];
    t2 += t * t;
  }
  return t2;
}

}  // namespace

AscentResult local_ascend(const SparsePolynomial& f0, std::span<const double> x0, const AscentOptions& opts) {
  if (static_cast<int>(x0.size()) != f0.num_vars()) throw Error(ErrorKind::DimensionMismatch, "start point size");
  if (std::abs(norm(x0) - 1.0) > 1e-8) throw Error(ErrorKind::NotOnSphere, "start point is not a unit vector");
  AscentResult res;
  res.point.assign(x0.begin(), x0.end());
  normalize(res.point);
  res.value = f0.evaluate(res.point);
  const double mass = f0.l1_norm();
  const int degree = std::max(f0.degree(), 1);
  if (mass == 0.0) {
    res.converged = true;
    return res;
  }
  double step = 1.0 / (static_cast<double>(degree) * mass);
  std::vector<double> trial(res.point.size());
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    const std::vector<double> g = f0.gradient(res.point);
    const double tangential2 = tangential_norm2(g, res.point);
    if (std::sqrt(tangential2) <= opts.gradient_tolerance) {
      res.converged = true;
      return res;
    }
    bool accepted = false;
    while (step > 1e-300) {
      for (std::size_t i = 0; i < g.size(); ++i) trial[i] = res.point[i] + step * g[i];
      normalize(trial);
      const double v = f0.evaluate(trial);
      const double gain = opts.armijo * step * tangential2;
      bool ok;
      if (gain > 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(res.value))) {
        ok = v >= res.value + gain;
      } else {
        // The predicted increase is below the rounding of f: accept only
        // moves that shrink the tangential gradient without losing value.
        ok = v >= res.value - 1e-15 * std::max(1.0, std::abs(res.value)) &&
             tangential_norm2(f0.gradient(trial), trial) < tangential2;
      }
      if (ok) {
        res.point = trial;
        res.value = v;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No representable step makes progress: stationary to working
      // precision.
      res.converged = std::sqrt(tangential2) <= 1e-6;
      return res;
    }
    step *= 2.0;
  }
  return res;
}

std::vector<double> random_unit_vector(int dim, std::uint64_t seed, std::uint64_t stream) {
  CounterRng rng(seed, stream);
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (;;) {
    for (double& v : x) v = rng.normal();
    if (norm(x) > 1e-12) break;
  }
  normalize(x);
  return x;
}

OracleResult multistart(const SparsePolynomial& f0, int restarts, std::uint64_t seed, const AscentOptions& opts) {
  if (restarts < 1) throw Error(ErrorKind::InvalidInput, "restarts must be at least 1");
  OracleResult best;
  best.method = OracleMethod::Ascent;
  best.restarts = restarts;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    const std::vector<double> x0 = random_unit_vector(f0.num_vars(), seed, static_cast<std::uint64_t>(r));
    AscentResult a = local_ascend(f0, x0, opts);
    if (!have || a.value > best.best_value) {
      best.best_value = a.value;
      best.best_point = std::move(a.point);
      have = true;
    }
  }
  // Re-evaluate so the reported value is exactly f_0 at the reported point.
  best.best_value = f0.evaluate(best.best_point);
  best.kkt_residual = kkt_residual(build_kkt_system(f0), best.best_point);
  return best;
}

OracleResult multistart(const SymmetricTensor& m, int restarts, std::uint64_t seed, const AscentOptions& opts) {
  return multistart(tensor_to_poly(m), restarts, seed, opts);
}

double net_lipschitz(const SparsePolynomial& f0, double* shift) {
  if (f0.is_zero()) {
    if (shift) *shift = 0.0;
    return 0.0;
  }
  if (!f0.is_homogeneous() || f0.degree() % 2 != 0) {
    throw Error(ErrorKind::NotHomogeneous, "net bracket needs a homogeneous even-degree objective");
  }
  const int d = f0.degree() / 2;
  const SparsePolynomial sphere = SparsePolynomial::sphere_power(f0.num_vars(), d);
  auto l1 = [&](double c) { return (f0 - sphere * c).l1_norm(); };
  // Convex piecewise linear in c; the minimum sits at a breakpoint.
  double best_c = 0.0, best = l1(0.0);
  for (const auto& [gamma, s] : sphere.terms()) {
    const double c = f0.coefficient(gamma) / s;
    const double v = l1(c);
    if (v < best) {
      best = v;
      best_c = c;
    }
  }
  if (shift) *shift = best_c;
  return 2.0 * d * best;
}

NetBracket net_enumerate(const SparsePolynomial& f0, double delta) {
  const int m = f0.num_vars();
  if (m > 4) throw Error(ErrorKind::TooManyVariables, "net enumeration is limited to four variables");
  if (m < 1) throw Error(ErrorKind::InvalidInput, "no variables");
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidInput, "net resolution must be positive");
  NetBracket out;
  out.lipschitz = net_lipschitz(f0, &out.shift);

  auto visit = [&](const std::vector<double>& x) {
    const double v = f0.evaluate(x);
    if (out.points == 0 || v > out.lower) {
      out.lower = v;
      out.point = x;
    }
    ++out.points;
  };

  if (m == 1) {
    visit({1.0});
    visit({-1.0});
  } else {
    // Each angle within h/2 of a grid value puts the point within
    // (h/2) sqrt(m-1) of the grid point, since the coordinate partials are
    // orthogonal with norm <= 1.
    const double h = 2.0 * delta / std::sqrt(static_cast<double>(m - 1));
    const int angles = m - 1;
    std::vector<int> count(static_cast<std::size_t>(angles));
    std::vector<double> spacing(static_cast<std::size_t>(angles));
    for (int k = 0; k < angles; ++k) {
      const bool periodic = k == angles - 1;
      const double range = periodic ? 2.0 * std::numbers::pi : std::numbers::pi;
      const int c = static_cast<int>(std::ceil(range / h)) + (periodic ? 0 : 1);
      count[static_cast<std::size_t>(k)] = std::max(c, periodic ? 3 : 2);
      spacing[static_cast<std::size_t>(k)] = range / (periodic ? count[static_cast<std::size_t>(k)] : count[static_cast<std::size_t>(k)] - 1);
    }
    std::vector<int> idx(static_cast<std::size_t>(angles), 0);
    std::vector<double> x(static_cast<std::size_t>(m));
    for (;;) {
      double sin_prod = 1.0;
      for (int k = 0; k < angles; ++k) {
        const double phi = idx[static_cast<std::size_t>(k)] * spacing[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(k)] = sin_prod * std::cos(phi);
        sin_prod *= std::sin(phi);
      }
      x[static_cast<std::size_t>(m - 1)] = sin_prod;
      visit(x);
      int k = angles - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == count[static_cast<std::size_t>(k)]) {
        idx[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  out.upper = out.lower + out.lipschitz * delta;
  return out;
}

NetBracket net_enumerate(const SymmetricTensor& m, double delta) { return net_enumerate(tensor_to_poly(m), delta); }

}  // namespace sephier
