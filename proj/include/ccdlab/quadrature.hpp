#pragma once

#include <vector>

namespace ccdlab {

/// Gauss-Hermite rule for weight e^{-x^2}: integral f(x) e^{-x^2} dx
/// ~ sum w_i f(x_i). Nodes ascending, exactly antisymmetric.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussHermite& gauss_hermite(int order);

}  // namespace ccdlab
