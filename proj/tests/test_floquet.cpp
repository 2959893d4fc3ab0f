#include "doctest.h"

#include <cmath>

#include "ccdlab/analysis.hpp"
#include "ccdlab/floquet.hpp"
#include "ccdlab/rng.hpp"
#include "support.hpp"

using namespace ccdlab;
using ccdlab::testing::state_distance;

namespace {
DriveConfig resonant(double Omega_mhz, double eps_mhz, double phi0 = 0.0, double phi_m = 0.0) {
  return DriveConfig::resonant_ccd(mhz_to_rad(2207.2), mhz_to_rad(Omega_mhz),
                                   mhz_to_rad(eps_mhz), phi0, phi_m, Modulation::Amplitude);
}
}  // namespace

TEST_CASE("monodromy: static limits") {
  // eps_m = 0, delta = 0: U(T) = exp(-i Omega T/2 sx).
  DriveConfig c = DriveConfig::from_detuning(mhz_to_rad(2207.2), 0.0, mhz_to_rad(1.0), 0.0,
                                             mhz_to_rad(7.5), 0.0, 0.0, Modulation::Amplitude);
  const M2 u = monodromy(c);
  const M2 expect = su2_exp({0.5 * c.Omega, 0.0, 0.0}, c.period());
  CHECK(testing::max_entry_diff(u, expect) < 1e-10);

  // Omega = 0, eps_m = 0, delta = 0: identity.
  DriveConfig idle = c;
  idle.Omega = 0.0;
  CHECK(testing::max_entry_diff(monodromy(idle), M2::identity()) < 1e-12);

  // Step-halving oracle.
  const DriveConfig ccd = resonant(7.5, 1.0);
  CHECK(testing::max_entry_diff(monodromy(ccd, 2048), monodromy(ccd, 20480)) < 1e-8);
}

TEST_CASE("quasienergies: static and resonant cases") {
  DriveConfig c = DriveConfig::from_detuning(mhz_to_rad(2207.2), 0.0, mhz_to_rad(1.0), 0.0,
                                             mhz_to_rad(7.5), 0.0, 0.0, Modulation::Amplitude);
  const QuasiEnergies q = quasienergies(monodromy(c), c.omega_m);
  CHECK(q.lambda_plus == doctest::Approx(mhz_to_rad(0.5)).epsilon(1e-8));
  CHECK(q.lambda_minus == doctest::Approx(-mhz_to_rad(0.5)).epsilon(1e-8));
  CHECK(q.gap == doctest::Approx(mhz_to_rad(1.0)).epsilon(1e-8));

  // Resonant CCD in the second-RWA regime: gap = eps_m within 2%.
  const DriveConfig ccd = resonant(7.5, 7.5 / 25.0);
  const QuasiEnergies q2 = quasienergies(monodromy(ccd), ccd.omega_m);
  CHECK(q2.gap == doctest::Approx(ccd.eps_m).epsilon(0.02));

  // Strong modulation: the monodromy numerics are the oracle; the gap moves
  // away from eps_m but stays consistent under step refinement.
  const DriveConfig strong = resonant(7.5, 3.75);
  const QuasiEnergies qa = quasienergies(monodromy(strong, 2048), strong.omega_m);
  const QuasiEnergies qb = quasienergies(monodromy(strong, 16384), strong.omega_m);
  CHECK(qa.gap == doctest::Approx(qb.gap).epsilon(1e-8));

  // Non-unitary input is rejected.
  M2 bad = M2::identity();
  bad.m00 = 1.5;
  CHECK_THROWS_AS(quasienergies(bad, 1.0), NumericError);
}

TEST_CASE("quasienergies: gap slope in eps_m equals 1 at resonance") {
  const double Omega = mhz_to_rad(7.5);
  const double e1 = Omega / 200.0, e2 = Omega / 100.0;
  const auto gap_at = [&](double em) {
    DriveConfig c = resonant(7.5, rad_to_mhz(em));
    return quasienergies(monodromy(c, 4096), c.omega_m).gap;
  };
  const double slope = (gap_at(e2) - gap_at(e1)) / (e2 - e1);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("floquet_analyze: mode invariants") {
  const DriveConfig c = resonant(7.5, 1.5, 0.3, 0.9);
  const FloquetData fd = floquet_analyze(c);
  CHECK(unitarity_defect(fd.monodromy) < 1e-10);

  // e^{-i lambda T} are eigenvalues of U(T): check via the characteristic
  // polynomial evaluated at both.
  for (double lam : {fd.lambda_plus, fd.lambda_minus}) {
    const cplx mu = std::polar(1.0, -lam * fd.period);
    const cplx det = (fd.monodromy.m00 - mu) * (fd.monodromy.m11 - mu) -
                     fd.monodromy.m01 * fd.monodromy.m10;
    CHECK(std::abs(det) < 1e-9);
  }

  // Orthonormal modes at every sample.
  for (int k = 0; k < fd.n_samples; ++k) {
    CHECK(std::abs(fd.mode_plus[k].norm() - 1.0) < 1e-10);
    CHECK(std::abs(inner(fd.mode_plus[k], fd.mode_minus[k])) < 1e-8);
  }

  // Periodicity Phi(T) = Phi(0), i.e. U(T) Phi(0) = e^{-i lambda T} Phi(0).
  for (const auto& [lam, mode] : {std::make_pair(fd.lambda_plus, fd.mode_plus[0]),
                                  std::make_pair(fd.lambda_minus, fd.mode_minus[0])}) {
    const C2 mapped = fd.monodromy * mode;
    const cplx factor = std::polar(1.0, -lam * fd.period);
    CHECK(std::abs(mapped.a0 - factor * mode.a0) < 1e-8);
    CHECK(std::abs(mapped.a1 - factor * mode.a1) < 1e-8);
  }
}

TEST_CASE("mode_decomposition: basis states and superpositions") {
  const DriveConfig c = resonant(7.5, 1.0);
  const FloquetData fd = floquet_analyze(c);

  const QubitState plus{fd.mode_plus[0].a0, fd.mode_plus[0].a1};
  auto [cp, cm] = mode_decomposition(plus, fd);
  CHECK(std::abs(cp) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(cm) < 1e-10);

  const double inv = 1.0 / std::sqrt(2.0);
  const QubitState sup{inv * (fd.mode_plus[0].a0 + fd.mode_minus[0].a0),
                       inv * (fd.mode_plus[0].a1 + fd.mode_minus[0].a1)};
  auto [cp2, cm2] = mode_decomposition(sup, fd);
  CHECK(std::abs(cp2) == doctest::Approx(inv).epsilon(1e-9));
  CHECK(std::abs(cm2) == doctest::Approx(inv).epsilon(1e-9));
  CHECK(std::norm(cp2) + std::norm(cm2) == doctest::Approx(1.0).epsilon(1e-9));

  // |0> with phi_m = pi/2 synchronizes to a single mode.
  const DriveConfig sync = resonant(7.5, 7.5 / 25.0, 0.0, pi / 2);
  auto [cp3, cm3] = mode_decomposition(QubitState::zero(), floquet_analyze(sync));
  CHECK(std::min(std::abs(cp3), std::abs(cm3)) < 0.05);
}

TEST_CASE("band_spectrum: single-mode purity") {
  const DriveConfig c = resonant(7.5, 1.2, 0.0, 0.4);
  const FloquetData fd = floquet_analyze(c);
  const QubitState plus{fd.mode_plus[0].a0, fd.mode_plus[0].a1};
  const BandSpectrum bs = band_spectrum(fd, plus, 6);
  double max_center = 0.0, max_side = 0.0;
  for (const auto& line : bs.lines) {
    if (line.family == 0)
      max_center = std::max(max_center, std::abs(line.amp));
    else
      max_side = std::max(max_side, std::abs(line.amp));
  }
  CHECK(max_side <= 1e-6 * max_center);
}

TEST_CASE("band_spectrum: Mollow peaks and FFT oracle") {
  const DriveConfig c = resonant(7.5, 1.0);  // phi_m = 0, psi0 = |0>: sidebands dominate
  const QubitState psi0 = QubitState::zero();
  const BandSpectrum bs = band_spectrum(c, psi0, 8);

  // The triplet frequencies all carry spectral weight: the two sidebands
  // dominate at phi_m = 0 and the center line is present but weak.
  const auto line_amp_near = [&](double freq) {
    double amp = 0.0;
    for (const auto& l : bs.lines)
      if (std::abs(l.freq - freq) < 0.02 * freq) amp = std::max(amp, std::abs(l.amp));
    return amp;
  };
  const double lower = line_amp_near(c.Omega - c.eps_m);
  const double upper = line_amp_near(c.Omega + c.eps_m);
  const double center = line_amp_near(c.Omega);
  CHECK(lower > 0.1);
  CHECK(upper > 0.1);
  CHECK(center > 1e-4);
  CHECK(center < 0.2 * lower);

  // Reconstruction matches direct propagation to 1e-4 RMS over 10 periods.
  const TimeGrid grid(0.0, 10.0 * c.period(), 1024);
  const Trajectory tr = propagate(Frame1Hamiltonian(c), psi0, grid);
  const std::vector<double> direct = population0(tr);
  const std::vector<double> recon = bs.reconstruct(grid.times());
  CHECK(testing::rms_diff(direct, recon) < 1e-4);

  // Peak amplitudes vs an FFT of a 50-period propagated signal within 1e-3.
  const TimeGrid longer(0.0, 50.0 * c.period(), 4096);
  const Trajectory tl = propagate(Frame1Hamiltonian(c), psi0, longer);
  const auto peaks = spectrum_peaks(population0(tl), longer.dt(), 3);
  REQUIRE(peaks.size() == 3);
  for (const auto& [freq, amp] : peaks) {
    // match against the nearest spectral line; the FFT amplitude of a line
    // 2 Re[A e^{-ift}] is 2|A|
    double best = 1e9, best_amp = 0.0;
    for (const auto& l : bs.lines) {
      if (std::abs(l.freq - freq) < best) {
        best = std::abs(l.freq - freq);
        best_amp = 2.0 * std::abs(l.amp);
      }
    }
    CHECK(amp == doctest::Approx(best_amp).epsilon(2e-3));
    CHECK(std::abs(amp - best_amp) < 1e-3 + 2e-3 * best_amp);
  }
}

TEST_CASE("band_spectrum: zone-shift invariance of the line set") {
  const DriveConfig c = resonant(7.5, 1.0, 0.1, 0.8);
  FloquetData fd = floquet_analyze(c);
  const QubitState psi0 = QubitState::from_angles(0.7, 0.3);
  const BandSpectrum a = band_spectrum(fd, psi0, 6);

  // Shift both quasi-energies by omega_m and recompute the modes
  // consistently (Phi -> Phi e^{+i omega_m t}).
  FloquetData shifted = fd;
  shifted.lambda_plus += fd.omega_m;
  shifted.lambda_minus += fd.omega_m;
  for (int k = 0; k < fd.n_samples; ++k) {
    const double t = fd.period * k / fd.n_samples;
    const cplx ph = std::polar(1.0, fd.omega_m * t);
    shifted.mode_plus[k] = {fd.mode_plus[k].a0 * ph, fd.mode_plus[k].a1 * ph};
    shifted.mode_minus[k] = {fd.mode_minus[k].a0 * ph, fd.mode_minus[k].a1 * ph};
  }
  const BandSpectrum b = band_spectrum(shifted, psi0, 6);

  // Same reconstruction, so the physical line content is identical.
  const TimeGrid grid(0.0, 5.0 * c.period(), 512);
  CHECK(testing::rms_diff(a.reconstruct(grid.times()), b.reconstruct(grid.times())) < 1e-9);
}

TEST_CASE("band_spectrum: reconstruction across random configs") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const double Omega = mhz_to_rad(3.0 + 7.0 * rng.uniform_pos());
    const double wm = Omega * (0.7 + 0.6 * rng.uniform_pos());
    const double eps = Omega * 0.5 * rng.uniform_pos();
    const double delta = Omega * 0.3 * (2.0 * rng.uniform_pos() - 1.0);
    const DriveConfig c = DriveConfig::from_detuning(
        mhz_to_rad(2207.2), delta, Omega, eps, wm, two_pi * rng.uniform_pos(),
        two_pi * rng.uniform_pos(),
        trial % 2 == 0 ? Modulation::Amplitude : Modulation::Phase);
    const QubitState psi0 =
        QubitState::from_angles(pi * rng.uniform_pos(), two_pi * rng.uniform_pos());
    const BandSpectrum bs = band_spectrum(c, psi0, 10);
    const TimeGrid grid(0.0, 10.0 * c.period(), 768);
    const Trajectory tr = propagate(Frame1Hamiltonian(c), psi0, grid);
    CHECK(testing::rms_diff(population0(tr), bs.reconstruct(grid.times())) < 1e-4);
  }
}

TEST_CASE("mode_control_phases: paper states and contract") {
  const DriveConfig c = resonant(7.5, 7.5 / 25.0);

  auto [p0, pm] = mode_control_phases(QubitState::zero(), c);
  CHECK(std::abs(p0 - 0.0) < 1e-2);
  CHECK(std::abs(pm - pi / 2) < 1e-2);

  const QubitState tilted{std::cos(pi / 8), std::polar(std::sin(pi / 8), pi / 4)};
  auto [p0b, pmb] = mode_control_phases(tilted, c);
  CHECK(std::abs(p0b - (-pi / 4)) < 1e-2);
  CHECK(std::abs(pmb - pi / 4) < 1e-2);

  // Contract: with the returned phases the minority amplitude is small.
  for (const auto& [state, phases] :
       {std::make_pair(QubitState::zero(), std::make_pair(p0, pm)),
        std::make_pair(tilted, std::make_pair(p0b, pmb))}) {
    DriveConfig s = c;
    s.phi0 = phases.first;
    s.phi_m = phases.second;
    auto [cp, cm] = mode_decomposition(state, floquet_analyze(s));
    CHECK(std::min(std::abs(cp), std::abs(cm)) <= std::max(0.05, 2.0 * c.eps_m / c.Omega));
  }

  // Sideband spectral weight under mode control at eps_m = Omega/25.
  DriveConfig s = c;
  s.phi0 = p0;
  s.phi_m = pm;
  const BandSpectrum bs = band_spectrum(s, QubitState::zero(), 6);
  CHECK(bs.sideband_weight() / bs.center_weight() < 1e-2);

  // Off-resonance input is refused.
  DriveConfig off = DriveConfig::from_detuning(mhz_to_rad(2207.2), mhz_to_rad(1.0),
                                               mhz_to_rad(7.5), mhz_to_rad(0.3), mhz_to_rad(7.5),
                                               0.0, 0.0, Modulation::Amplitude);
  CHECK_THROWS_AS(mode_control_phases(QubitState::zero(), off), UnsupportedRegime);
  DriveConfig no_mod = c;
  no_mod.eps_m = 0.0;
  CHECK_THROWS_AS(mode_control_phases(QubitState::zero(), no_mod), UnsupportedRegime);
}
