#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccdlab/errors.hpp"

namespace ccdlab {

enum class FitModelKind {
  MultiDampedCosine,    // c0 + sum_i c_i e^{-t/tau_i} cos(w_i t + phi_i)
  StretchedDampedCosine,  // c0 + c1 e^{-(t/tau)^alpha} cos(w1 t + phi1)
  WindowCosine,         // c0 + (c1/2) cos(w1 t + phi1)
  Exponential           // c0 + c1 e^{-t/tau}
};

struct FitModel {
  FitModelKind kind = FitModelKind::MultiDampedCosine;
  int components = 1;  // K, MultiDampedCosine only

  static FitModel damped_cosines(int k) { return {FitModelKind::MultiDampedCosine, k}; }
  static FitModel stretched() { return {FitModelKind::StretchedDampedCosine, 1}; }
  static FitModel window_cosine() { return {FitModelKind::WindowCosine, 1}; }
  static FitModel exponential() { return {FitModelKind::Exponential, 1}; }

  int n_params() const;
};

struct FitResult {
  FitModel model;
  double c0 = 0.0;
  struct Component {
    double c = 0.0;
    double tau = 0.0;    // s; +inf for WindowCosine
    double omega = 0.0;  // rad/s; 0 for Exponential
    double phi = 0.0;
  };
  std::vector<Component> components;
  double alpha = 1.0;  // StretchedDampedCosine only
  double residual_rms = 0.0;
  bool converged = false;
  bool omega_defined = true;  // false for flat-signal WindowCosine shortcut
  int iterations = 0;
  std::vector<double> covariance_diagonal;
  std::string diagnostics;

  /// Packed parameter vector in the optimizer's ordering (for refits).
  std::vector<double> packed() const;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) least squares on a uniformly
/// sampled signal. Frequencies are confined to (0, Nyquist), decay times to
/// (dt, 1e6 dt), alpha to (0, 4]. Initial guesses come from FFT peaks and a
/// log-envelope slope unless `hints` provides a packed parameter vector.
/// Non-convergence within 500 iterations returns the best-so-far parameters
/// with converged = false.
FitResult fit(const std::vector<double>& t, const std::vector<double>& y, const FitModel& model,
              const std::optional<std::vector<double>>& hints = std::nullopt);

/// Oscillation contrast on a short window, via the 4-parameter model
/// c0 + (c1/2) cos(w1 t + phi1); c1 is reported non-negative (a sign flip is
/// absorbed into phi1). A flat signal yields c1 = 0 with omega_defined =
/// false.
struct WindowContrastResult {
  double c1 = 0.0, omega1 = 0.0, phi1 = 0.0;
  bool omega_defined = true;
};
WindowContrastResult window_contrast(const std::vector<double>& t, const std::vector<double>& y);

/// Dominant spectral peaks of a uniformly sampled signal (Hann window,
/// parabolic interpolation), strongest first. Returns (angular frequency,
/// cosine amplitude); fewer than n_peaks entries when fewer peaks exist.
std::vector<std::pair<double, double>> spectrum_peaks(const std::vector<double>& y, double dt,
                                                      int n_peaks);

}  // namespace ccdlab
