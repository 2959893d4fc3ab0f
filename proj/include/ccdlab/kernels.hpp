#pragma once

#include <cstddef>

namespace ccdlab::kernels {

/// Data-parallel inner loops behind the Monte Carlo and ensemble engines,
/// in scalar reference form and (on x86-64) an AVX2+FMA variant chosen at
/// runtime. The two are equivalence-tested; CCDLAB_KERNELS=scalar|avx2
/// overrides the automatic choice.
///
/// su2_step_batch applies |psi_i> <- exp(-i dt (cx_i sx + cy_i sy + cz_i sz))
/// lane by lane on the split-complex state arrays. The SIMD variant expands
/// sin/cos in Taylor series valid for step angles |c| dt <= 0.2 rad — the
/// integrator substep rule (50 samples per fastest period) guarantees
/// 2*pi/50 ~ 0.126. The scalar reference is exact for any angle.
struct KernelSet {
  void (*su2_step_batch)(double* re0, double* im0, double* re1, double* im1, const double* cx,
                         const double* cy, const double* cz, double dt, std::size_t n);
  /// x_i <- x_i * decay + amp * g_i (exact Ornstein-Uhlenbeck update).
  void (*ou_step)(double* x, const double* g, double decay, double amp, std::size_t n);
  /// out_j += sum_k w_k cos(f_k (t0 + j dt)), j in [0, nt).
  void (*weighted_cos_accum)(const double* w, const double* f, std::size_t nk, double t0,
                             double dt, double* out, std::size_t nt);
  const char* name;
};

const KernelSet& scalar_kernels();

/// True when the AVX2 variant is both compiled in and supported by this CPU.
bool avx2_available();
const KernelSet& avx2_kernels();  // call only when avx2_available()

/// Runtime selection (AVX2 when available unless overridden by the
/// CCDLAB_KERNELS environment variable).
const KernelSet& active_kernels();

}  // namespace ccdlab::kernels
