#pragma once

#include <cstdint>
#include <vector>

#include "ccdlab/analysis.hpp"
#include "ccdlab/evolution.hpp"
#include "ccdlab/model.hpp"

namespace ccdlab {

/// One noise channel of a Monte Carlo run.
///
/// Spectral sources (OU, band-limited white) are specified by the nominal
/// spectrum entering the rate formulas; the engine realizes them as
/// coefficient processes of two-sided PSD S(nu)/2, which makes the analytic
/// rates exact for the simulated dynamics (the rate formulas follow the
/// normalization in which S plays the role of a one-sided density).
///
/// StaticGaussian sigma is in the physical units of the target parameter —
/// a detuning std for xi_z, a Rabi-amplitude std for xi_Omega, a
/// modulation-amplitude std for xi_em — matching InhomogeneityModel, so
/// sampling it reproduces the ensemble module's quadrature.
struct NoiseTrajectorySpec {
  enum class Source { OU, WhiteBandLimited, StaticGaussian };
  enum class Target { XiX, XiZ, XiOmega, XiEm };

  Source source = Source::OU;
  Target target = Target::XiZ;
  double variance = 0.0;  // OU stationary variance, (rad/s)^2
  double tau_c = 0.0;     // OU correlation time, s
  double level = 0.0;     // white two-sided PSD level, rad/s
  double cutoff = 0.0;    // white bandwidth, rad/s
  double sigma = 0.0;     // static std, rad/s
  std::uint64_t seed = 0;

  static NoiseTrajectorySpec ou(Target t, double variance, double tau_c, std::uint64_t seed = 0) {
    NoiseTrajectorySpec s;
    s.source = Source::OU;
    s.target = t;
    s.variance = variance;
    s.tau_c = tau_c;
    s.seed = seed;
    return s;
  }
  static NoiseTrajectorySpec white(Target t, double level, double cutoff,
                                   std::uint64_t seed = 0) {
    NoiseTrajectorySpec s;
    s.source = Source::WhiteBandLimited;
    s.target = t;
    s.level = level;
    s.cutoff = cutoff;
    s.seed = seed;
    return s;
  }
  static NoiseTrajectorySpec static_gaussian(Target t, double sigma, std::uint64_t seed = 0) {
    NoiseTrajectorySpec s;
    s.source = Source::StaticGaussian;
    s.target = t;
    s.sigma = sigma;
    s.seed = seed;
    return s;
  }

  bool is_static() const { return source == Source::StaticGaussian; }
  void validate() const;
};

/// Ornstein-Uhlenbeck realization with the exact Gauss-Markov update
/// x_{k+1} = x_k e^{-dt/tau_c} + sigma sqrt(1 - e^{-2 dt/tau_c}) g_k,
/// stationary start, deterministic per spec.seed. Correlation
/// sigma^2 e^{-|dt|/tau_c} <-> two-sided PSD 2 sigma^2 tau_c/(1+nu^2 tau_c^2).
std::vector<double> ou_trajectory(const NoiseTrajectorySpec& spec, double dt, std::size_t n);

enum class McObservable { Population0, BlochX, BlochY, BlochZ };

struct McOptions {
  int threads = 0;  // 0 = auto
  McObservable observable = McObservable::Population0;
  Frame observable_frame = Frame::Frame1;
  double substep_factor = 1.0;
};

struct McSignal {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> std_error;
  int n_traj = 0;
};

/// Mean observable over n_traj noise realizations of the frame-1 CCD
/// Hamiltonian with the requested channels injected into its coefficients
/// (xi_z on sigma_z, xi_Omega/2 on the static axis, xi_em on the modulation
/// amplitude, xi_x through its omega_0 rotating factors). Trajectory k draws
/// from seed base_seed + k; the reduction is a fixed pairwise tree, so the
/// result is bitwise reproducible for any thread count.
McSignal mc_signal(const DriveConfig& cfg, const std::vector<NoiseTrajectorySpec>& specs,
                   const QubitState& psi0, const TimeGrid& grid, int n_traj,
                   std::uint64_t base_seed, const McOptions& opt = {});

struct McRate {
  double rate = 0.0;        // 1/s
  double half_width = 0.0;  // bootstrap spread (std of 20 resampled refits)
  FitResult fit;
};

/// Decay rate of the mean signal: fit, one window iteration at 3/rate, then
/// a 20-resample bootstrap for the uncertainty. Throws FitFailure when the
/// main fit does not converge.
McRate mc_decay_rate(const DriveConfig& cfg, const std::vector<NoiseTrajectorySpec>& specs,
                     const QubitState& psi0, const TimeGrid& grid, int n_traj,
                     std::uint64_t base_seed, const FitModel& model, const McOptions& opt = {});

}  // namespace ccdlab
