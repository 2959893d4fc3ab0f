#ifdef CCDLAB_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

#include "ccdlab/kernels.hpp"

namespace ccdlab::kernels {

namespace {

// Taylor polynomials in u = theta^2, full double precision for theta <= 0.2.
inline __m256d cos_small(__m256d u) {
  const __m256d c12 = _mm256_set1_pd(1.0 / 479001600.0);
  const __m256d c10 = _mm256_set1_pd(-1.0 / 3628800.0);
  const __m256d c8 = _mm256_set1_pd(1.0 / 40320.0);
  const __m256d c6 = _mm256_set1_pd(-1.0 / 720.0);
  const __m256d c4 = _mm256_set1_pd(1.0 / 24.0);
  const __m256d c2 = _mm256_set1_pd(-0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d p = _mm256_fmadd_pd(c12, u, c10);
  p = _mm256_fmadd_pd(p, u, c8);
  p = _mm256_fmadd_pd(p, u, c6);
  p = _mm256_fmadd_pd(p, u, c4);
  p = _mm256_fmadd_pd(p, u, c2);
  return _mm256_fmadd_pd(p, u, one);
}

// sin(theta)/theta for theta <= 0.2, series in u = theta^2.
inline __m256d sinc_small(__m256d u) {
  const __m256d c12 = _mm256_set1_pd(1.0 / 6227020800.0);
  const __m256d c10 = _mm256_set1_pd(-1.0 / 39916800.0);
  const __m256d c8 = _mm256_set1_pd(1.0 / 362880.0);
  const __m256d c6 = _mm256_set1_pd(-1.0 / 5040.0);
  const __m256d c4 = _mm256_set1_pd(1.0 / 120.0);
  const __m256d c2 = _mm256_set1_pd(-1.0 / 6.0);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d p = _mm256_fmadd_pd(c12, u, c10);
  p = _mm256_fmadd_pd(p, u, c8);
  p = _mm256_fmadd_pd(p, u, c6);
  p = _mm256_fmadd_pd(p, u, c4);
  p = _mm256_fmadd_pd(p, u, c2);
  return _mm256_fmadd_pd(p, u, one);
}

void su2_step_batch_avx2(double* re0, double* im0, double* re1, double* im1, const double* cx,
                         const double* cy, const double* cz, double dt, std::size_t n) {
  const __m256d vdt = _mm256_set1_pd(dt);
  const __m256d vdt2 = _mm256_set1_pd(dt * dt);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d hx = _mm256_loadu_pd(cx + i);
    const __m256d hy = _mm256_loadu_pd(cy + i);
    const __m256d hz = _mm256_loadu_pd(cz + i);
    __m256d h2 = _mm256_mul_pd(hx, hx);
    h2 = _mm256_fmadd_pd(hy, hy, h2);
    h2 = _mm256_fmadd_pd(hz, hz, h2);
    const __m256d u = _mm256_mul_pd(h2, vdt2);  // theta^2
    const __m256d c = cos_small(u);
    const __m256d s = _mm256_mul_pd(vdt, sinc_small(u));  // sin(theta)/|h|
    const __m256d nx = _mm256_mul_pd(hx, s);
    const __m256d ny = _mm256_mul_pd(hy, s);
    const __m256d nz = _mm256_mul_pd(hz, s);

    const __m256d r0 = _mm256_loadu_pd(re0 + i);
    const __m256d i0 = _mm256_loadu_pd(im0 + i);
    const __m256d r1 = _mm256_loadu_pd(re1 + i);
    const __m256d i1 = _mm256_loadu_pd(im1 + i);

    // re0' = c r0 + nz i0 + nx i1 - ny r1
    __m256d a = _mm256_mul_pd(c, r0);
    a = _mm256_fmadd_pd(nz, i0, a);
    a = _mm256_fmadd_pd(nx, i1, a);
    a = _mm256_fnmadd_pd(ny, r1, a);
    // im0' = c i0 - nz r0 - nx r1 - ny i1
    __m256d b = _mm256_mul_pd(c, i0);
    b = _mm256_fnmadd_pd(nz, r0, b);
    b = _mm256_fnmadd_pd(nx, r1, b);
    b = _mm256_fnmadd_pd(ny, i1, b);
    // re1' = ny r0 + nx i0 + c r1 - nz i1
    __m256d d = _mm256_mul_pd(ny, r0);
    d = _mm256_fmadd_pd(nx, i0, d);
    d = _mm256_fmadd_pd(c, r1, d);
    d = _mm256_fnmadd_pd(nz, i1, d);
    // im1' = -nx r0 + ny i0 + c i1 + nz r1
    __m256d e = _mm256_mul_pd(ny, i0);
    e = _mm256_fnmadd_pd(nx, r0, e);
    e = _mm256_fmadd_pd(c, i1, e);
    e = _mm256_fmadd_pd(nz, r1, e);

    _mm256_storeu_pd(re0 + i, a);
    _mm256_storeu_pd(im0 + i, b);
    _mm256_storeu_pd(re1 + i, d);
    _mm256_storeu_pd(im1 + i, e);
  }
  if (i < n)
    scalar_kernels().su2_step_batch(re0 + i, im0 + i, re1 + i, im1 + i, cx + i, cy + i, cz + i,
                                    dt, n - i);
}

void ou_step_avx2(double* x, const double* g, double decay, double amp, std::size_t n) {
  const __m256d vd = _mm256_set1_pd(decay);
  const __m256d va = _mm256_set1_pd(amp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d gv = _mm256_loadu_pd(g + i);
    _mm256_storeu_pd(x + i, _mm256_fmadd_pd(xv, vd, _mm256_mul_pd(va, gv)));
  }
  if (i < n) scalar_kernels().ou_step(x + i, g + i, decay, amp, n - i);
}

// Four phasors advanced by complex rotation; cos evaluated only at setup.
void weighted_cos_accum_avx2(const double* w, const double* f, std::size_t nk, double t0,
                             double dt, double* out, std::size_t nt) {
  std::size_t k = 0;
  alignas(32) double zr[4], zi[4], cr[4], ci[4], wk[4];
  for (; k + 4 <= nk; k += 4) {
    for (int l = 0; l < 4; ++l) {
      zr[l] = std::cos(f[k + l] * t0);
      zi[l] = std::sin(f[k + l] * t0);
      cr[l] = std::cos(f[k + l] * dt);
      ci[l] = std::sin(f[k + l] * dt);
      wk[l] = w[k + l];
    }
    __m256d vzr = _mm256_load_pd(zr), vzi = _mm256_load_pd(zi);
    const __m256d vcr = _mm256_load_pd(cr), vci = _mm256_load_pd(ci);
    const __m256d vw = _mm256_load_pd(wk);
    for (std::size_t j = 0; j < nt; ++j) {
      const __m256d contrib = _mm256_mul_pd(vw, vzr);
      // Horizontal sum of 4 lanes.
      const __m128d lo = _mm256_castpd256_pd128(contrib);
      const __m128d hi = _mm256_extractf128_pd(contrib, 1);
      const __m128d sum2 = _mm_add_pd(lo, hi);
      out[j] += _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
      // (zr, zi) *= (cr, ci)
      const __m256d nzr = _mm256_fnmadd_pd(vzi, vci, _mm256_mul_pd(vzr, vcr));
      const __m256d nzi = _mm256_fmadd_pd(vzr, vci, _mm256_mul_pd(vzi, vcr));
      vzr = nzr;
      vzi = nzi;
    }
  }
  if (k < nk) scalar_kernels().weighted_cos_accum(w + k, f + k, nk - k, t0, dt, out, nt);
}

}  // namespace

const KernelSet& avx2_kernels() {
  static const KernelSet set{su2_step_batch_avx2, ou_step_avx2, weighted_cos_accum_avx2, "avx2"};
  return set;
}

}  // namespace ccdlab::kernels

#endif  // CCDLAB_HAVE_AVX2
