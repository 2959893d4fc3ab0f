#pragma once

#include <complex>
#include <vector>

namespace ccdlab {

/// Hann-windowed, zero-padded magnitude spectrum of a uniformly sampled real
/// signal. freq(k) = two_pi * k / (n_pad * dt), k in [0, n_pad/2].
struct HannSpectrum {
  std::vector<double> mag;  // |X_k|, k = 0 .. n_pad/2
  double dt = 0.0;
  int n_pad = 0;
  double window_sum = 0.0;  // sum of Hann weights over the original samples

  double freq(int k) const;                  // rad/s
  double amplitude_scale() const;            // |X| -> cosine amplitude factor
};

HannSpectrum hann_spectrum(const std::vector<double>& y, double dt, int pad_factor = 4);

/// In-place-style complex FFT (forward, unnormalized), power-of-two length.
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in);

}  // namespace ccdlab
