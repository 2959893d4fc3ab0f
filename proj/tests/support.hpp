#pragma once

#include <cmath>
#include <vector>

#include "ccdlab/rng.hpp"
#include "ccdlab/su2.hpp"

namespace ccdlab::testing {

inline double max_entry_diff(const M2& a, const M2& b) {
  double d = std::abs(a.m00 - b.m00);
  d = std::max(d, std::abs(a.m01 - b.m01));
  d = std::max(d, std::abs(a.m10 - b.m10));
  d = std::max(d, std::abs(a.m11 - b.m11));
  return d;
}

// Fidelity-style distance ignoring global phase; floor ~1e-8 from the sqrt.
inline double state_distance(const C2& a, const C2& b) {
  return std::sqrt(std::max(0.0, 1.0 - std::norm(inner(a, b))));
}

// Max componentwise distance after aligning the global phase; resolves to
// rounding level.
inline double aligned_distance(const C2& a, const C2& b) {
  const cplx ov = inner(b, a);
  const cplx ph = std::abs(ov) > 0.0 ? std::conj(ov) / std::abs(ov) : cplx(1.0, 0.0);
  return std::max(std::abs(a.a0 * ph - b.a0), std::abs(a.a1 * ph - b.a1));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double rms_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / a.size());
}

}  // namespace ccdlab::testing
