#include <cstdlib>
#include <cstring>
#include <mutex>

#include "ccdlab/errors.hpp"
#include "ccdlab/kernels.hpp"

namespace ccdlab::kernels {

bool avx2_available() {
#ifdef CCDLAB_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#ifndef CCDLAB_HAVE_AVX2
const KernelSet& avx2_kernels() {
  throw UnsupportedRegime("AVX2 kernels were not compiled into this build");
}
#endif

const KernelSet& active_kernels() {
  static const KernelSet* chosen = [] {
    const char* env = std::getenv("CCDLAB_KERNELS");
    if (env != nullptr) {
      if (std::strcmp(env, "scalar") == 0) return &scalar_kernels();
      if (std::strcmp(env, "avx2") == 0) {
        if (!avx2_available())
          throw UnsupportedRegime("CCDLAB_KERNELS=avx2 requested but AVX2 is unavailable");
        return &avx2_kernels();
      }
      throw InvalidArgument("CCDLAB_KERNELS must be 'scalar' or 'avx2'");
    }
    return avx2_available() ? &avx2_kernels() : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace ccdlab::kernels
