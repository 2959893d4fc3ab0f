#pragma once

#include <utility>
#include <vector>

#include "ccdlab/evolution.hpp"

namespace ccdlab {

/// One-period Floquet decomposition of the frame-1 CCD Hamiltonian:
/// monodromy U(T), quasi-energies lambda+- in the principal zone
/// (-omega_m/2, omega_m/2], and the periodic modes Phi+-(t) sampled at
/// n_samples points across the period.
struct FloquetData {
  double period = 0.0;
  double omega_m = 0.0;
  M2 monodromy = M2::identity();
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double gap = 0.0;  // lambda_plus - lambda_minus >= 0
  int n_samples = 0;
  std::vector<C2> mode_plus, mode_minus;  // Phi+-(k T / n_samples)
};

struct QuasiEnergies {
  double lambda_plus, lambda_minus, gap;
};

/// Period propagator U(T, 0) of the frame-1 Hamiltonian.
M2 monodromy(const DriveConfig& cfg, int steps_per_period = 2048);

/// Quasi-energies from a period propagator. Throws NumericError if U is not
/// unitary to 1e-8.
QuasiEnergies quasienergies(const M2& u, double omega_m);

FloquetData floquet_analyze(const DriveConfig& cfg, int n_samples = 256,
                            int steps_per_period = 2048);

/// Coefficients (c+, c-) of psi0 on the Floquet modes at t = 0.
std::pair<cplx, cplx> mode_decomposition(const QubitState& psi0, const FloquetData& fd);

/// One spectral line of the P|0>(t) signal. The real signal is
///   P(t) = sum_{f=0 lines} Re(amp) + sum_{f>0 lines} 2 Re(amp e^{-i f t}).
/// family: 0 center (k omega_m), +1 upper sidebands (k omega_m + gap),
/// -1 lower sidebands (k omega_m - gap).
struct BandLine {
  double freq = 0.0;  // rad/s, >= 0
  cplx amp{0.0, 0.0};
  int family = 0;
  int k = 0;
};

struct BandSpectrum {
  std::vector<BandLine> lines;
  double omega_m = 0.0;
  double gap = 0.0;

  std::vector<double> reconstruct(const std::vector<double>& times) const;
  /// Sum of |amp|^2 over oscillating center-family lines (k >= 1).
  double center_weight() const;
  /// Sum of |amp|^2 over all sideband-family lines.
  double sideband_weight() const;
};

/// Spectral content of P|0>(t) for the two-mode evolution
/// Psi(t) = c+ e^{-i lambda+ t} Phi+(t) + c- e^{-i lambda- t} Phi-(t),
/// with harmonics |k| <= n_max.
BandSpectrum band_spectrum(const DriveConfig& cfg, const QubitState& psi0, int n_max,
                           int n_samples = 256, int steps_per_period = 2048);
BandSpectrum band_spectrum(const FloquetData& fd, const QubitState& psi0, int n_max);

/// Drive phases (phi0, phi_m) that align the second-frame static field with
/// psi0 so that only the center band evolves. Requires the synchronization
/// regime delta = 0, omega_m = Omega, eps_m > 0; otherwise throws
/// UnsupportedRegime. The analytic geometric solution is polished by a
/// bounded local search minimizing |c-|.
std::pair<double, double> mode_control_phases(const QubitState& psi0, const DriveConfig& cfg);

}  // namespace ccdlab
