#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "ccdlab/errors.hpp"
#include "ccdlab/su2.hpp"
#include "ccdlab/units.hpp"

namespace ccdlab {

enum class Modulation { Amplitude, Phase, None };

/// Drive parameters for a two-level system under concatenated continuous
/// driving. A carrier at omega (strength Omega, phase phi0) addresses the
/// qubit splitting omega0; a second field of strength eps_m at omega_m
/// (phase phi_m) modulates either the carrier amplitude or its phase.
///
/// delta = omega - omega0 is stored redundantly and kept consistent by the
/// factories. All frequencies are angular (rad/s), phases in radians.
struct DriveConfig {
  double omega0 = 0.0;
  double omega = 0.0;
  double delta = 0.0;
  double Omega = 0.0;
  double eps_m = 0.0;
  double omega_m = 0.0;
  double phi0 = 0.0;
  double phi_m = 0.0;
  Modulation modulation = Modulation::None;

  static DriveConfig from_carrier(double omega0, double omega, double Omega, double eps_m,
                                  double omega_m, double phi0, double phi_m, Modulation mod) {
    DriveConfig c{omega0, omega, omega - omega0, Omega, eps_m, omega_m, phi0, phi_m, mod};
    c.validate();
    return c;
  }
  static DriveConfig from_detuning(double omega0, double delta, double Omega, double eps_m,
                                   double omega_m, double phi0, double phi_m, Modulation mod) {
    // delta is re-derived from the rounded omega so the exact identity
    // delta == omega - omega0 survives floating point.
    const double omega = omega0 + delta;
    DriveConfig c{omega0, omega, omega - omega0, Omega, eps_m, omega_m, phi0, phi_m, mod};
    c.validate();
    return c;
  }
  /// Resonant CCD at the synchronization point omega = omega0, omega_m = Omega.
  static DriveConfig resonant_ccd(double omega0, double Omega, double eps_m, double phi0,
                                  double phi_m, Modulation mod) {
    return from_detuning(omega0, 0.0, Omega, eps_m, Omega, phi0, phi_m, mod);
  }

  void validate() const {
    if (!(std::isfinite(omega0) && std::isfinite(omega) && std::isfinite(Omega) &&
          std::isfinite(eps_m) && std::isfinite(omega_m) && std::isfinite(phi0) &&
          std::isfinite(phi_m)))
      throw InvalidArgument("DriveConfig: non-finite parameter");
    if (delta != omega - omega0)
      throw InvalidArgument("DriveConfig: delta must equal omega - omega0 exactly");
    if (Omega < 0.0) throw InvalidArgument("DriveConfig: Omega must be >= 0");
    if (eps_m < 0.0) throw InvalidArgument("DriveConfig: eps_m must be >= 0");
    if (modulation != Modulation::None && !(omega_m > 0.0))
      throw InvalidArgument("DriveConfig: omega_m must be > 0 when modulation is active");
    if (modulation == Modulation::Phase && !(Omega > 0.0))
      throw InvalidArgument("DriveConfig: phase modulation requires Omega > 0");
  }

  double period() const {
    if (!(omega_m > 0.0)) throw InvalidArgument("DriveConfig: period undefined for omega_m == 0");
    return two_pi / omega_m;
  }

  /// Rotating-wave-approximation sanity. Ratios above `threshold` flag a
  /// warning; they never block a computation.
  struct RwaReport {
    double first_ratio;   // max(Omega, eps_m) / omega0
    double second_ratio;  // eps_m / Omega
    bool first_ok;
    bool second_ok;
  };
  RwaReport rwa_report(double threshold = 0.1) const {
    RwaReport r{};
    r.first_ratio = omega0 > 0.0 ? std::max(Omega, eps_m) / omega0
                                 : std::numeric_limits<double>::infinity();
    r.second_ratio = Omega > 0.0 ? eps_m / Omega : (eps_m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.first_ok = r.first_ratio <= threshold;
    r.second_ok = modulation == Modulation::None || r.second_ratio <= threshold;
    return r;
  }
};

/// Pure two-level state |psi> = a0|0> + a1|1>.
struct QubitState {
  cplx a0{1.0, 0.0}, a1{0.0, 0.0};

  static QubitState zero() { return {1.0, 0.0}; }
  static QubitState one() { return {0.0, 1.0}; }
  static QubitState plus_x() { return {cplx(1.0 / std::sqrt(2.0), 0), cplx(1.0 / std::sqrt(2.0), 0)}; }
  static QubitState plus_y() { return {cplx(1.0 / std::sqrt(2.0), 0), cplx(0, 1.0 / std::sqrt(2.0))}; }
  /// State with Bloch vector (sin th cos ph, sin th sin ph, cos th).
  static QubitState from_angles(double theta, double phi) {
    return {cplx(std::cos(theta / 2.0), 0.0),
            std::polar(std::sin(theta / 2.0), phi)};
  }

  C2 c2() const { return {a0, a1}; }
  double norm() const { return c2().norm(); }

  QubitState normalized() const {
    const double n = norm();
    if (n <= 0.0) throw NumericError("QubitState: cannot normalize the zero vector");
    return {a0 / n, a1 / n};
  }

  /// Global phase fixed so a0 is real non-negative when |a0| > 1e-12,
  /// otherwise so a1 is. Applied at observable extraction only.
  QubitState canonical() const {
    const QubitState s = normalized();
    const cplx ref = std::abs(s.a0) > 1e-12 ? s.a0 : s.a1;
    const cplx ph = std::polar(1.0, -std::arg(ref));
    return {s.a0 * ph, s.a1 * ph};
  }
};

struct BlochVector {
  double x = 0.0, y = 0.0, z = 1.0;
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline BlochVector bloch(const QubitState& s) {
  const cplx c = std::conj(s.a0) * s.a1;
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(s.a0) - std::norm(s.a1)};
}

inline QubitState from_bloch(const BlochVector& b) {
  const double n = b.norm();
  if (n <= 0.0) throw InvalidArgument("from_bloch: zero vector");
  const double theta = std::acos(std::clamp(b.z / n, -1.0, 1.0));
  const double phi = std::atan2(b.y, b.x);
  return QubitState::from_angles(theta, phi);
}

// ---------------------------------------------------------------------------
// Noise spectra
// ---------------------------------------------------------------------------

/// Two-sided spectral density in angular frequency, S(nu) = S(-nu) >= 0,
/// normalized so the GBE rate formulas read off its values directly.
///
/// A StaticGaussian term is a delta spike at nu = 0 (static inhomogeneity of
/// std sigma): it contributes 0 at nu != 0 and has no finite density at
/// nu = 0, so evaluating there throws UnsupportedRegime. Static spreads are
/// the business of the ensemble and stochastic modules, never of the
/// analytic rate formulas.
struct SpectralFunction {
  struct White {
    double level = 0.0;  // rad/s
  };
  struct Lorentzian {
    double variance = 0.0;  // (rad/s)^2
    double tau_c = 0.0;     // s
  };
  struct StaticGaussian {
    double sigma = 0.0;  // rad/s
  };
  using Term = std::variant<White, Lorentzian, StaticGaussian>;

  std::vector<Term> terms;

  static SpectralFunction zero() { return {}; }
  static SpectralFunction white(double level) { return {{White{level}}}; }
  static SpectralFunction lorentzian(double variance, double tau_c) {
    return {{Lorentzian{variance, tau_c}}};
  }
  static SpectralFunction static_gaussian(double sigma) { return {{StaticGaussian{sigma}}}; }

  SpectralFunction& operator+=(const SpectralFunction& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
  }

  bool has_static() const {
    for (const auto& t : terms)
      if (std::holds_alternative<StaticGaussian>(t)) return true;
    return false;
  }
  bool is_zero() const;

  void validate() const;

  /// S(nu). Throws UnsupportedRegime when nu == 0 and a static term is present.
  double operator()(double nu) const;
};

/// Lab-frame PSDs of the four noise channels of the stochastic CCD
/// Hamiltonian: transverse field xi_x, longitudinal field xi_z, first-drive
/// amplitude xi_Omega and modulation amplitude xi_em.
struct NoisePSDSet {
  SpectralFunction S_x, S_z, S_Omega, S_em;

  void validate() const {
    S_x.validate();
    S_z.validate();
    S_Omega.validate();
    S_em.validate();
  }
};

// ---------------------------------------------------------------------------
// Ensemble inhomogeneity
// ---------------------------------------------------------------------------

/// Static ensemble spread: Gaussian drive-strength inhomogeneity
/// sigma_Omega = sigma_Omega_rel * Omega, Gaussian detuning spread
/// sigma_omega, an intrinsic coherence time tau0, and three hyperfine
/// sublevels at offsets {-A, 0, +A} weighted by sublevel_populations.
struct InhomogeneityModel {
  double sigma_Omega_rel = 0.0;
  double sigma_omega = 0.0;  // rad/s
  double tau0 = std::numeric_limits<double>::infinity();
  double hyperfine_A = 0.0;  // rad/s
  std::array<double, 3> sublevel_populations{0.0, 1.0, 0.0};
  std::array<double, 3> sublevel_offsets{0.0, 0.0, 0.0};  // rad/s, derived from A by default

  /// The sample's characterization values: sigma_Omega = 1.6% of Omega,
  /// sigma_omega = (2pi)0.32 MHz, tau0 = 13 us, A = (2pi)2.2 MHz, 73%
  /// polarization in the addressed sublevel.
  static InhomogeneityModel nv_sample_defaults() {
    InhomogeneityModel m;
    m.sigma_Omega_rel = 0.016;
    m.sigma_omega = mhz_to_rad(0.32);
    m.tau0 = us_to_s(13.0);
    m.hyperfine_A = mhz_to_rad(2.2);
    m.sublevel_populations = {0.135, 0.73, 0.135};
    m.sublevel_offsets = {-m.hyperfine_A, 0.0, +m.hyperfine_A};
    return m;
  }

  void validate() const {
    if (sigma_Omega_rel < 0.0 || sigma_omega < 0.0)
      throw InvalidArgument("InhomogeneityModel: sigma values must be >= 0");
    if (!(tau0 > 0.0)) throw InvalidArgument("InhomogeneityModel: tau0 must be > 0 (or infinite)");
    double sum = 0.0;
    for (double c : sublevel_populations) {
      if (c < 0.0) throw InvalidArgument("InhomogeneityModel: populations must be >= 0");
      sum += c;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InvalidArgument("InhomogeneityModel: populations must sum to 1");
  }
};

// ---------------------------------------------------------------------------
// Drive waveform and Hamiltonians
// ---------------------------------------------------------------------------

/// Lab-frame drive coefficient of sigma_x at time t (rad/s).
/// Amplitude: Omega cos(wt+phi0) - 2 eps_m sin(wt+phi0) cos(wm t+phi_m).
/// Phase:     Omega cos(wt + (2 eps_m/Omega) cos(wm t+phi_m) + phi0).
double waveform(const DriveConfig& cfg, double t);

/// First-rotating-frame RWA Hamiltonian (traceless, rad/s).
/// Amplitude: -(d/2)sz + (W/2)x~ + eps_m cos(wm t+phi_m) y~
/// Phase:     -(d/2)sz + (W/2)x~ + eps_m (wm/W) sin(wm t+phi_m) sz
/// where (x~, y~) are the transverse axes rotated about z by phi0.
PauliCoeffs hamiltonian_frame1(const DriveConfig& cfg, double t);

/// Full lab-frame Hamiltonian (w0/2)sz + waveform(t) sx.
PauliCoeffs hamiltonian_lab(const DriveConfig& cfg, double t);

}  // namespace ccdlab
