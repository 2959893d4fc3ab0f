#include "doctest.h"

#include <cmath>
#include <numeric>

#include "ccdlab/ensemble.hpp"
#include "ccdlab/fftutil.hpp"
#include "ccdlab/gbe.hpp"
#include "ccdlab/quadrature.hpp"
#include "ccdlab/stochastic.hpp"
#include "support.hpp"

using namespace ccdlab;
using Target = NoiseTrajectorySpec::Target;

namespace {
const double kOmega0 = mhz_to_rad(2207.2);

DriveConfig bare_drive(double Omega_mhz) {
  return DriveConfig::from_detuning(kOmega0, 0.0, mhz_to_rad(Omega_mhz), 0.0,
                                    mhz_to_rad(Omega_mhz), 0.0, 0.0, Modulation::None);
}
}  // namespace

TEST_CASE("ou_trajectory: degenerate inputs and moments") {
  NoiseTrajectorySpec zero = NoiseTrajectorySpec::ou(Target::XiZ, 0.0, 1e-6, 1);
  const auto z = ou_trajectory(zero, 1e-8, 1000);
  for (double v : z) CHECK(v == 0.0);
  CHECK(ou_trajectory(zero, 1e-8, 0).empty());

  const double sigma = mhz_to_rad(0.1);
  NoiseTrajectorySpec spec = NoiseTrajectorySpec::ou(Target::XiZ, sigma * sigma, 1e-6, 42);
  const double dt = 1e-7;
  const std::size_t n = 1u << 20;
  const auto x = ou_trajectory(spec, dt, n);

  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n) * (1e-6 / dt)));

  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;
  CHECK(var == doctest::Approx(sigma * sigma).epsilon(0.02));

  // Autocorrelation at lag tau_c is variance / e within 5%.
  const std::size_t lag = static_cast<std::size_t>(1e-6 / dt);
  double ac = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) ac += x[i] * x[i + lag];
  ac /= (n - lag);
  CHECK(ac == doctest::Approx(sigma * sigma / std::numbers::e).epsilon(0.05));
}

TEST_CASE("ou_trajectory: periodogram matches the Lorentzian") {
  const double tau_c = 1e-6;
  const double sigma = mhz_to_rad(0.2);
  const double dt = tau_c / 64.0;
  const std::size_t n = 1u << 20;
  NoiseTrajectorySpec spec = NoiseTrajectorySpec::ou(Target::XiZ, sigma * sigma, tau_c, 7);
  const auto x = ou_trajectory(spec, dt, n);

  // Welch estimate: 256 rectangular segments of 4096 samples.
  const std::size_t seg = 4096, n_seg = n / seg;
  std::vector<double> psd(seg / 2, 0.0);
  for (std::size_t s = 0; s < n_seg; ++s) {
    std::vector<cplx> buf(seg);
    for (std::size_t i = 0; i < seg; ++i) buf[i] = x[s * seg + i];
    const auto sp = fft_forward(buf);
    for (std::size_t k = 0; k < seg / 2; ++k) psd[k] += std::norm(sp[k]) * dt / seg;
  }
  for (double& v : psd) v /= n_seg;

  // Band-averaged comparison over [0.1/tau_c, 5/tau_c].
  const double dnu = two_pi / (seg * dt);
  const auto S = [&](double nu) {
    return 2.0 * sigma * sigma * tau_c / (1.0 + nu * nu * tau_c * tau_c);
  };
  for (double lo = 0.1 / tau_c; lo < 5.0 / tau_c; lo *= 1.6) {
    const double hi = std::min(lo * 1.6, 5.0 / tau_c);
    double est = 0.0, ref = 0.0;
    int cnt = 0;
    for (std::size_t k = 1; k < seg / 2; ++k) {
      const double nu = k * dnu;
      if (nu >= lo && nu < hi) {
        est += psd[k];
        ref += S(nu);
        ++cnt;
      }
    }
    if (cnt == 0) continue;
    CHECK(est / cnt == doctest::Approx(ref / cnt).epsilon(0.10));
  }
}

TEST_CASE("stream splitting: trajectory k draws from base_seed + k") {
  CHECK(stream_seed(1000, 17, 2, 5) == stream_seed(1017, 0, 2, 5));
  CHECK(stream_seed(1000, 17, 2, 5) != stream_seed(1000, 18, 2, 5));
  CHECK(stream_seed(1000, 17, 1, 5) != stream_seed(1000, 17, 2, 5));
}

TEST_CASE("mc_signal: no noise reproduces the deterministic propagation") {
  DriveConfig cfg = DriveConfig::resonant_ccd(kOmega0, mhz_to_rad(5.0), mhz_to_rad(1.0), 0.0,
                                              0.4, Modulation::Amplitude);
  const TimeGrid grid(0.0, 3e-6, 301);
  const McSignal sig = mc_signal(cfg, {}, QubitState::zero(), grid, 3, 99);

  PropagateOptions opt;
  opt.scheme = Scheme::Midpoint;  // the engine's stepping rule
  const Trajectory tr = propagate(Frame1Hamiltonian(cfg), QubitState::zero(), grid, opt);
  const auto p = population0(tr);
  CHECK(testing::max_abs_diff(sig.mean, p) < 1e-12);
  for (double se : sig.std_error) CHECK(se < 1e-14);
}

TEST_CASE("mc_signal: determinism, thread invariance, duplicate targets") {
  DriveConfig cfg = bare_drive(1.0);
  const TimeGrid grid(0.0, 5e-6, 101);
  const std::vector<NoiseTrajectorySpec> specs{
      NoiseTrajectorySpec::ou(Target::XiZ, std::pow(mhz_to_rad(0.1), 2), 5e-7, 3)};

  McOptions o1;
  o1.threads = 1;
  McOptions o4;
  o4.threads = 4;
  const McSignal a = mc_signal(cfg, specs, QubitState::plus_x(), grid, 130, 12345, o1);
  const McSignal b = mc_signal(cfg, specs, QubitState::plus_x(), grid, 130, 12345, o4);
  const McSignal c = mc_signal(cfg, specs, QubitState::plus_x(), grid, 130, 12345, o4);
  for (int i = 0; i < grid.n_points; ++i) {
    CHECK(a.mean[i] == b.mean[i]);  // bitwise, independent of thread count
    CHECK(b.mean[i] == c.mean[i]);
    CHECK(a.std_error[i] == b.std_error[i]);
  }

  const std::vector<NoiseTrajectorySpec> dup{
      NoiseTrajectorySpec::ou(Target::XiZ, 1.0, 1e-6),
      NoiseTrajectorySpec::ou(Target::XiZ, 2.0, 1e-6)};
  CHECK_THROWS_AS(mc_signal(cfg, dup, QubitState::zero(), grid, 2, 1), InvalidArgument);

  // Static and dynamic on the same target is allowed.
  const std::vector<NoiseTrajectorySpec> mix{
      NoiseTrajectorySpec::ou(Target::XiZ, 1.0, 1e-6),
      NoiseTrajectorySpec::static_gaussian(Target::XiZ, 1.0)};
  CHECK_NOTHROW(mc_signal(cfg, mix, QubitState::zero(), grid, 2, 1));
}

TEST_CASE("mc static Gaussian detuning matches the exact-quadrature average") {
  // Resonant Rabi at (2pi)0.7 MHz with static detuning spread
  // sigma = (2pi)0.32 MHz and drive spread 1.6%: the MC average must agree
  // with direct Gauss-Hermite integration of the exact Rabi formula.
  const double Omega = mhz_to_rad(0.7);
  const double sigma_w = mhz_to_rad(0.32);
  const double sigma_O = 0.016 * Omega;
  DriveConfig cfg = bare_drive(0.7);
  const TimeGrid grid(0.0, 6e-6, 81);

  const std::vector<NoiseTrajectorySpec> specs{
      NoiseTrajectorySpec::static_gaussian(Target::XiZ, sigma_w, 11),
      NoiseTrajectorySpec::static_gaussian(Target::XiOmega, sigma_O, 12)};
  const McSignal sig = mc_signal(cfg, specs, QubitState::zero(), grid, 1500, 777);

  // Exact average: P0(t) = 1 - (O'^2/OR^2) sin^2(OR t / 2).
  const GaussHermite& gh = gauss_hermite(48);
  std::vector<double> exact(grid.n_points, 0.0);
  double wsum = 0.0;
  for (int a = 0; a < 48; ++a) {
    for (int b = 0; b < 48; ++b) {
      const double Op = Omega + std::sqrt(2.0) * sigma_O * gh.nodes[a];
      const double dp = std::sqrt(2.0) * sigma_w * gh.nodes[b];
      const double wr2 = Op * Op + dp * dp;
      const double w = gh.weights[a] * gh.weights[b];
      wsum += w;
      for (int i = 0; i < grid.n_points; ++i) {
        const double s = std::sin(0.5 * std::sqrt(wr2) * grid.time(i));
        exact[i] += w * (1.0 - (Op * Op / wr2) * s * s);
      }
    }
  }
  for (double& v : exact) v /= wsum;

  int outliers = 0;
  double worst = 0.0;
  for (int i = 1; i < grid.n_points; ++i) {
    const double z = std::abs(sig.mean[i] - exact[i]) / std::max(sig.std_error[i], 1e-12);
    worst = std::max(worst, z);
    if (z > 3.0) ++outliers;
  }
  CHECK(outliers == 0);
  CHECK(worst < 3.0);

  // Fitted tau against the ensemble module's oscillation-component model.
  InhomogeneityModel inh;
  inh.sigma_Omega_rel = 0.016;
  inh.sigma_omega = sigma_w;
  inh.tau0 = std::numeric_limits<double>::infinity();
  inh.sublevel_populations = {0.0, 1.0, 0.0};
  inh.sublevel_offsets = {0.0, 0.0, 0.0};
  const TimeGrid fine(0.0, 6e-6, 601);
  const auto model = ensemble_rabi(Omega, 0.0, inh, fine);
  const FitResult fm = fit(fine.times(), model, FitModel::damped_cosines(1));
  REQUIRE(fm.converged);

  const McSignal sig_f = mc_signal(cfg, specs, QubitState::zero(), fine, 1500, 777);
  const FitResult fs = fit(fine.times(), sig_f.mean, FitModel::damped_cosines(1));
  REQUIRE(fs.converged);
  CHECK(fs.components[0].tau == doctest::Approx(fm.components[0].tau).epsilon(0.05));
}

TEST_CASE("frame convention: static z offset agrees between lab and frame 1") {
  // A spin-frequency shift omega0 -> omega0 - xi at fixed drive frequency
  // equals a frame-1 detuning shift delta -> delta + xi.
  const double xi = mhz_to_rad(0.21);
  const double omega0 = mhz_to_rad(900.0);
  const double Omega = mhz_to_rad(0.9);
  DriveConfig lab_cfg = DriveConfig::from_carrier(omega0 - xi, omega0, Omega, 0.0, Omega, 0.0,
                                                  0.0, Modulation::None);
  DriveConfig f1_cfg = DriveConfig::from_detuning(omega0, xi, Omega, 0.0, Omega, 0.0, 0.0,
                                                  Modulation::None);
  const TimeGrid grid(0.0, 2.0 * pi / Omega, 41);
  PropagateOptions lab_opt;
  lab_opt.frame = Frame::Lab;
  const Trajectory tlab = propagate(LabHamiltonian(lab_cfg), QubitState::zero(), grid, lab_opt);
  const Trajectory t1 = to_frame(tlab, Frame::Frame1, lab_cfg);
  const Trajectory t2 = propagate(Frame1Hamiltonian(f1_cfg), QubitState::zero(), grid);
  CHECK(testing::max_abs_diff(population0(t1), population0(t2)) < 5.0 * Omega / omega0);
}

TEST_CASE("spin locking: OU xi_z rate matches the analytic T1rho") {
  const double Omega = mhz_to_rad(1.0);
  const double sigma = mhz_to_rad(0.1);
  const double tau_c = 1e-6;
  DriveConfig cfg = bare_drive(1.0);
  NoisePSDSet psd;
  psd.S_z = SpectralFunction::lorentzian(sigma * sigma, tau_c);
  const double predicted = 1.0 / rates_single_resonant(psd, Omega, kOmega0).t1;

  const std::vector<NoiseTrajectorySpec> specs{
      NoiseTrajectorySpec::ou(Target::XiZ, sigma * sigma, tau_c)};
  McOptions opt;
  opt.observable = McObservable::BlochX;
  const TimeGrid grid(0.0, 120e-6, 601);
  const McRate r = mc_decay_rate(cfg, specs, QubitState::plus_x(), grid, 800, 2026,
                                 FitModel::exponential(), opt);
  CHECK(r.rate == doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("white-limit spin locking: rate ~ 2 sigma^2 tau_c") {
  const double Omega = mhz_to_rad(0.5);
  const double sigma = mhz_to_rad(0.3);
  const double tau_c = 2e-8;  // Omega tau_c = 0.063
  DriveConfig cfg = bare_drive(0.5);
  const std::vector<NoiseTrajectorySpec> specs{
      NoiseTrajectorySpec::ou(Target::XiZ, sigma * sigma, tau_c)};
  McOptions opt;
  opt.observable = McObservable::BlochX;
  const TimeGrid grid(0.0, 20e-6, 501);
  const McRate r = mc_decay_rate(cfg, specs, QubitState::plus_x(), grid, 400, 7,
                                 FitModel::exponential(), opt);
  CHECK(r.rate == doctest::Approx(2.0 * sigma * sigma * tau_c).epsilon(0.2));
}

TEST_CASE("transverse xi_x channel reproduces the T1 rate") {
  // Scaled-down splitting keeps the omega0-resolving integration cheap.
  const double omega0 = mhz_to_rad(50.0);
  const double sigma = mhz_to_rad(1.0);
  const double tau_c = 5e-9;
  DriveConfig cfg = DriveConfig::from_detuning(omega0, 0.0, 0.0, 0.0, mhz_to_rad(1.0), 0.0, 0.0,
                                               Modulation::None);
  NoisePSDSet psd;
  psd.S_x = SpectralFunction::lorentzian(sigma * sigma, tau_c);
  const double predicted = psd.S_x(omega0);  // 1/T1 = S_x(omega0)

  const std::vector<NoiseTrajectorySpec> specs{
      NoiseTrajectorySpec::ou(Target::XiX, sigma * sigma, tau_c)};
  McOptions opt;
  opt.observable = McObservable::BlochZ;
  const TimeGrid grid(0.0, 25e-6, 401);
  const McRate r = mc_decay_rate(cfg, specs, QubitState::zero(), grid, 400, 31,
                                 FitModel::exponential(), opt);
  CHECK(r.rate == doctest::Approx(predicted).epsilon(0.2));
}

TEST_CASE("mc_decay_rate: zero noise reports a null rate") {
  DriveConfig cfg = bare_drive(1.0);
  McOptions opt;
  opt.observable = McObservable::BlochX;
  const TimeGrid grid(0.0, 10e-6, 201);
  const McRate r = mc_decay_rate(cfg, {}, QubitState::plus_x(), grid, 4, 5,
                                 FitModel::exponential(), opt);
  CHECK(r.rate == 0.0);
  CHECK(std::abs(r.rate) <= r.half_width + 1e-30);
}

TEST_CASE("mc_decay_rate: bootstrap half-width shrinks like 1/sqrt(n)") {
  const double Omega = mhz_to_rad(1.0);
  const double sigma = mhz_to_rad(0.2);
  const double tau_c = 5e-7;
  DriveConfig cfg = bare_drive(1.0);
  (void)Omega;
  const std::vector<NoiseTrajectorySpec> specs{
      NoiseTrajectorySpec::ou(Target::XiZ, sigma * sigma, tau_c)};
  McOptions opt;
  opt.observable = McObservable::BlochX;
  const TimeGrid grid(0.0, 25e-6, 301);

  double ratio_sum = 0.0;
  const int n_seeds = 4;
  for (int s = 0; s < n_seeds; ++s) {
    const McRate small = mc_decay_rate(cfg, specs, QubitState::plus_x(), grid, 250,
                                       9000 + 31 * s, FitModel::exponential(), opt);
    const McRate big = mc_decay_rate(cfg, specs, QubitState::plus_x(), grid, 500,
                                     7000 + 37 * s, FitModel::exponential(), opt);
    ratio_sum += big.half_width / small.half_width;
  }
  const double ratio = ratio_sum / n_seeds;
  CHECK(ratio == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}
