#include "ccdlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "ccdlab/errors.hpp"
#include "ccdlab/units.hpp"

namespace ccdlab {

namespace {

// Orthonormal Hermite value and derivative at x (weight e^{-x^2}).
void hermite_eval(int n, double x, double& p, double& dp) {
  double p0 = std::pow(pi, -0.25);
  double p1 = std::sqrt(2.0) * x * p0;
  for (int j = 2; j <= n; ++j) {
    const double p2 = x * std::sqrt(2.0 / j) * p1 - std::sqrt((j - 1.0) / j) * p0;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = std::sqrt(2.0 * n) * p0;
}

GaussHermite compute_gauss_hermite(int n) {
  if (n < 1) throw InvalidArgument("gauss_hermite: order must be >= 1");
  GaussHermite gh;
  gh.nodes.assign(n, 0.0);
  gh.weights.assign(n, 0.0);

  const int half = (n + 1) / 2;
  double x = 0.0;
  for (int i = 0; i < half; ++i) {
    // Initial guesses for the roots, largest first.
    if (i == 0) {
      x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      x -= 1.14 * std::pow(n, 0.426) / x;
    } else if (i == 2) {
      x = 1.86 * x - 0.86 * gh.nodes[n - 1];
    } else if (i == 3) {
      x = 1.91 * x - 0.91 * gh.nodes[n - 2];
    } else {
      x = 2.0 * x - gh.nodes[n - i + 1];
    }
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      hermite_eval(n, x, p, dp);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    hermite_eval(n, x, p, dp);
    gh.nodes[n - 1 - i] = x;
    gh.nodes[i] = -x;
    const double w = 2.0 / (dp * dp);
    gh.weights[n - 1 - i] = w;
    gh.weights[i] = w;
  }
  if (n % 2 == 1) gh.nodes[n / 2] = 0.0;  // exact center
  return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(int order) {
  static std::mutex mtx;
  static std::map<int, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_hermite(order)).first;
  return it->second;
}

}  // namespace ccdlab
