#include "ccdlab/fftutil.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "ccdlab/errors.hpp"
#include "ccdlab/units.hpp"

namespace ccdlab {

namespace {
// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

double HannSpectrum::freq(int k) const { return two_pi * k / (n_pad * dt); }

double HannSpectrum::amplitude_scale() const { return window_sum > 0.0 ? 2.0 / window_sum : 0.0; }

HannSpectrum hann_spectrum(const std::vector<double>& y, double dt, int pad_factor) {
  if (y.size() < 4) throw InvalidArgument("hann_spectrum: need at least 4 samples");
  if (!(dt > 0.0)) throw InvalidArgument("hann_spectrum: dt must be > 0");
  const int n = static_cast<int>(y.size());
  const int n_pad = next_pow2(n * std::max(1, pad_factor));

  std::vector<double> in(n_pad, 0.0);
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(two_pi * i / (n - 1)));
    in[i] = y[i] * w;
    wsum += w;
  }

  std::vector<std::complex<double>> out(n_pad / 2 + 1);
  {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(plan_mutex());
      plan = fftw_plan_dft_r2c_1d(n_pad, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                  FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lock(plan_mutex());
      fftw_destroy_plan(plan);
    }
  }

  HannSpectrum s;
  s.dt = dt;
  s.n_pad = n_pad;
  s.window_sum = wsum;
  s.mag.resize(out.size());
  for (size_t k = 0; k < out.size(); ++k) s.mag[k] = std::abs(out[k]);
  return s;
}

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in) {
  const int n = static_cast<int>(in.size());
  if (n == 0 || (n & (n - 1)) != 0)
    throw InvalidArgument("fft_forward: length must be a nonzero power of two");
  std::vector<std::complex<double>> a = in, out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace ccdlab
