#include <cmath>

#include "ccdlab/kernels.hpp"

namespace ccdlab::kernels {

namespace {

void su2_step_batch_scalar(double* re0, double* im0, double* re1, double* im1, const double* cx,
                           const double* cy, const double* cz, double dt, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double hx = cx[i], hy = cy[i], hz = cz[i];
    const double h = std::sqrt(hx * hx + hy * hy + hz * hz);
    const double th = h * dt;
    const double c = std::cos(th);
    const double s = th == 0.0 ? dt : std::sin(th) / h;
    const double nx = hx * s, ny = hy * s, nz = hz * s;
    const double r0 = re0[i], i0 = im0[i], r1 = re1[i], i1 = im1[i];
    re0[i] = c * r0 + nz * i0 + nx * i1 - ny * r1;
    im0[i] = c * i0 - nz * r0 - nx * r1 - ny * i1;
    re1[i] = ny * r0 + nx * i0 + c * r1 - nz * i1;
    im1[i] = -nx * r0 + ny * i0 + c * i1 + nz * r1;
  }
}

void ou_step_scalar(double* x, const double* g, double decay, double amp, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * decay + amp * g[i];
}

void weighted_cos_accum_scalar(const double* w, const double* f, std::size_t nk, double t0,
                               double dt, double* out, std::size_t nt) {
  for (std::size_t k = 0; k < nk; ++k) {
    const double wk = w[k], fk = f[k];
    for (std::size_t j = 0; j < nt; ++j) out[j] += wk * std::cos(fk * (t0 + j * dt));
  }
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{su2_step_batch_scalar, ou_step_scalar, weighted_cos_accum_scalar,
                             "scalar"};
  return set;
}

}  // namespace ccdlab::kernels
