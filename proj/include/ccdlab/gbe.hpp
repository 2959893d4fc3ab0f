#pragma once

#include <functional>

#include "ccdlab/evolution.hpp"
#include "ccdlab/model.hpp"

namespace ccdlab {

enum class Scenario { SingleResonant, SingleDetuned, CCDAmplitude, CCDPhase };

enum class RateVariant {
  /// Rates assembled from the working-frame PSDs with the spectral arguments
  /// kept exact. Default.
  ExactArgument,
  /// The printed closed forms, which collapse S_x(omega0 +- ...) to
  /// S_x(omega0).
  PaperApproximated,
  /// The shorter main-text forms of the amplitude-CCD rates (no
  /// S_em(2 Omega +- eps_m) and no S_em(2 Omega) terms).
  MainTextSimplified
};

/// Noise spectral densities seen along the working-frame axes.
struct FramePSDs {
  std::function<double(double)> S_x, S_y, S_z;
};

/// Relaxation output. gamma_* are the decay rates of the working-frame Pauli
/// components; t1/t2 are the longitudinal/transverse times about the static
/// axis of the scenario; t2_pure satisfies 1/t2 = 1/(2 t1) + 1/t2_pure
/// identically. regime_valid flags parameter regions where the underlying
/// approximations degrade (it never blocks the computation).
struct DecayRates {
  double gamma_x = 0.0, gamma_y = 0.0, gamma_z = 0.0;
  double t1 = 0.0, t2 = 0.0, t2_pure = 0.0;
  Frame frame = Frame::Frame1;
  Scenario scenario = Scenario::SingleResonant;
  RateVariant variant = RateVariant::ExactArgument;
  bool regime_valid = true;
};

// Working-frame PSDs for the four driving scenarios.
FramePSDs frame1_psds(const NoisePSDSet& psd, double omega0);
FramePSDs frame1_psds_detuned(const NoisePSDSet& psd, double Omega, double delta, double omega0);
FramePSDs frame2_psds_amplitude(const NoisePSDSet& psd, double Omega, double omega0);
FramePSDs frame2_psds_phase(const NoisePSDSet& psd, double Omega, double eps_m, double omega0);

/// On-resonance single drive (omega = omega0): first-frame rates about the
/// static axis x with gap Omega.
DecayRates rates_single_resonant(const NoisePSDSet& psd, double Omega, double omega0,
                                 RateVariant variant = RateVariant::ExactArgument);

/// Detuned single drive: rates about the tilted axis x' with gap
/// Omega_R = sqrt(delta^2 + Omega^2).
DecayRates rates_single_detuned(const NoisePSDSet& psd, double Omega, double delta, double omega0,
                                RateVariant variant = RateVariant::ExactArgument);

/// Amplitude-modulated CCD at the synchronization point (omega = omega0,
/// omega_m = Omega): second-frame rates about the static axis y with gap
/// eps_m. 1/t1 is the center-band (T1rr) rate, 1/t2 the sideband (T2rr) rate.
DecayRates rates_ccd_amplitude(const NoisePSDSet& psd, double Omega, double eps_m, double omega0,
                               RateVariant variant = RateVariant::ExactArgument);

/// Phase-modulated CCD to first order in eps_m/Omega. Throws when
/// eps_m > Omega; flags regime_valid = false above eps_m/Omega = 0.2.
DecayRates rates_ccd_phase(const NoisePSDSet& psd, double Omega, double eps_m, double omega0,
                           RateVariant variant = RateVariant::ExactArgument);

/// Spin-locking relaxometry inversion: S_z(Omega) = rate - 1/(2 T1).
double spinlock_psd_inversion(double rate_1_over_tau, double t1);

}  // namespace ccdlab
