#include "ccdlab/gbe.hpp"

#include <cmath>

namespace ccdlab {

namespace {

// 1/4 [S(nu + w) + S(nu - w)], the sideband pair every frame change produces.
double pair_shift(const SpectralFunction& s, double nu, double w) {
  return 0.25 * (s(nu + w) + s(nu - w));
}

// The transverse lab channel always enters through cos/sin(omega0 t) factors;
// under the printed approximation its shifted arguments collapse to omega0.
struct SxChannel {
  const SpectralFunction& s;
  double omega0;
  bool collapse;
  // 1/4 [S_x(nu + omega0 + off) + S_x(nu - omega0 + off)] summed over the
  // offsets; `off` list carries extra +-omega_m style shifts.
  double pair(double nu, double off = 0.0) const {
    if (collapse) return 0.5 * s(omega0);
    return 0.25 * (s(nu + omega0 + off) + s(nu - omega0 + off));
  }
  // Four-term group 1/16 sum_{s1,s2} S_x(nu + s1 omega0 + s2 w).
  double quad(double nu, double w) const {
    if (collapse) return 0.25 * s(omega0);
    return 0.0625 * (s(nu + omega0 + w) + s(nu + omega0 - w) + s(nu - omega0 + w) +
                     s(nu - omega0 - w));
  }
};

FramePSDs frame1_psds_impl(const NoisePSDSet& psd, double omega0, bool collapse) {
  const SxChannel sx{psd.S_x, omega0, collapse};
  return {
      [psd, sx](double nu) { return 0.25 * psd.S_Omega(nu) + sx.pair(nu); },
      [sx](double nu) { return sx.pair(nu); },
      [psd](double nu) { return psd.S_z(nu); },
  };
}

FramePSDs frame1_psds_detuned_impl(const NoisePSDSet& psd, double Omega, double delta,
                                   double omega0, bool collapse) {
  const double wr2 = Omega * Omega + delta * delta;
  if (!(wr2 > 0.0))
    throw InvalidArgument("rates_single_detuned: effective drive Omega_R must be > 0");
  const double a = Omega * Omega / wr2;  // cos^2 of the tilt
  const double b = delta * delta / wr2;
  const SxChannel sx{psd.S_x, omega0, collapse};
  const auto drive = [psd, sx](double nu) { return 0.25 * psd.S_Omega(nu) + sx.pair(nu); };
  return {
      [psd, drive, a, b](double nu) { return b * psd.S_z(nu) + a * drive(nu); },
      [sx](double nu) { return sx.pair(nu); },
      [psd, drive, a, b](double nu) { return a * psd.S_z(nu) + b * drive(nu); },
  };
}

FramePSDs frame2_psds_amplitude_impl(const NoisePSDSet& psd, double Omega, double omega0,
                                     bool collapse) {
  const double wm = Omega;  // resonance omega_m = Omega assumed throughout D.3
  const SxChannel sx{psd.S_x, omega0, collapse};
  const auto common = [psd, sx, wm](double nu) {
    return 0.0625 * (psd.S_em(nu + 2.0 * wm) + psd.S_em(nu - 2.0 * wm)) +
           pair_shift(psd.S_z, nu, wm) + sx.quad(nu, wm);
  };
  return {
      [psd, sx](double nu) { return 0.25 * psd.S_Omega(nu) + sx.pair(nu); },
      [psd, common](double nu) { return 0.25 * psd.S_em(nu) + common(nu); },
      [common](double nu) { return common(nu); },
  };
}

FramePSDs frame2_psds_phase_impl(const NoisePSDSet& psd, double Omega, double eps_m,
                                 double omega0, bool collapse) {
  const double wm = Omega;
  const double r2 = (eps_m / Omega) * (eps_m / Omega);
  const SxChannel sx{psd.S_x, omega0, collapse};
  return {
      [psd, sx, r2, wm](double nu) {
        return 0.25 * psd.S_Omega(nu) + sx.pair(nu) + 4.0 * r2 * sx.quad(nu, wm);
      },
      [psd, sx, r2, wm](double nu) {
        return pair_shift(psd.S_z, nu, wm) + sx.quad(nu, wm) + r2 * sx.pair(nu) +
               r2 * sx.quad(nu, 2.0 * wm);
      },
      [psd, sx, r2, wm](double nu) {
        return pair_shift(psd.S_z, nu, wm) + sx.quad(nu, wm) + r2 * sx.quad(nu, 2.0 * wm);
      },
  };
}

// Decay rates about a static axis u with gap `gap`:
// Gamma_u = S_v(gap) + S_w(gap); the two transverse components pick up the
// longitudinal spectrum at zero plus the other transverse one at the gap.
struct AxisRates {
  double gamma_u, gamma_v, gamma_w;
};
AxisRates axis_rates(const FramePSDs& f, const std::function<double(double)>& su,
                     const std::function<double(double)>& sv,
                     const std::function<double(double)>& sw, double gap) {
  return {sv(gap) + sw(gap), su(0.0) + sw(gap), su(0.0) + sv(gap)};
}

DecayRates assemble(double gamma_long, double gamma_t1, double gamma_t2) {
  DecayRates r;
  r.t1 = 1.0 / gamma_long;
  const double g2 = 0.5 * (gamma_t1 + gamma_t2);
  r.t2 = 1.0 / g2;
  r.t2_pure = 1.0 / (g2 - 0.5 * gamma_long);
  return r;
}

double max_lorentzian_rate(const SpectralFunction& s) {
  double m = 0.0;
  for (const auto& t : s.terms)
    if (const auto* l = std::get_if<SpectralFunction::Lorentzian>(&t))
      m = std::max(m, 1.0 / l->tau_c);
  return m;
}

}  // namespace

FramePSDs frame1_psds(const NoisePSDSet& psd, double omega0) {
  return frame1_psds_impl(psd, omega0, false);
}
FramePSDs frame1_psds_detuned(const NoisePSDSet& psd, double Omega, double delta, double omega0) {
  return frame1_psds_detuned_impl(psd, Omega, delta, omega0, false);
}
FramePSDs frame2_psds_amplitude(const NoisePSDSet& psd, double Omega, double omega0) {
  return frame2_psds_amplitude_impl(psd, Omega, omega0, false);
}
FramePSDs frame2_psds_phase(const NoisePSDSet& psd, double Omega, double eps_m, double omega0) {
  return frame2_psds_phase_impl(psd, Omega, eps_m, omega0, false);
}

DecayRates rates_single_resonant(const NoisePSDSet& psd, double Omega, double omega0,
                                 RateVariant variant) {
  psd.validate();
  if (!(Omega > 0.0)) throw InvalidArgument("rates_single_resonant: Omega must be > 0");
  if (variant == RateVariant::MainTextSimplified)
    throw InvalidArgument("rates_single_resonant: no main-text simplified form exists");
  const bool collapse = variant == RateVariant::PaperApproximated;
  const FramePSDs f = frame1_psds_impl(psd, omega0, collapse);
  // Static axis x, gap Omega.
  const AxisRates a = axis_rates(f, f.S_x, f.S_y, f.S_z, Omega);
  DecayRates r = assemble(a.gamma_u, a.gamma_v, a.gamma_w);
  r.gamma_x = a.gamma_u;
  r.gamma_y = a.gamma_v;
  r.gamma_z = a.gamma_w;
  r.frame = Frame::Frame1;
  r.scenario = Scenario::SingleResonant;
  r.variant = variant;
  return r;
}

DecayRates rates_single_detuned(const NoisePSDSet& psd, double Omega, double delta, double omega0,
                                RateVariant variant) {
  psd.validate();
  if (variant == RateVariant::MainTextSimplified)
    throw InvalidArgument("rates_single_detuned: no main-text simplified form exists");
  const double wr2 = Omega * Omega + delta * delta;
  if (!(wr2 > 0.0)) throw InvalidArgument("rates_single_detuned: Omega_R must be > 0");
  const double wr = std::sqrt(wr2);
  const bool collapse = variant == RateVariant::PaperApproximated;
  const FramePSDs f = frame1_psds_detuned_impl(psd, Omega, delta, omega0, collapse);
  const AxisRates a = axis_rates(f, f.S_x, f.S_y, f.S_z, wr);
  DecayRates r = assemble(a.gamma_u, a.gamma_v, a.gamma_w);
  if (variant == RateVariant::PaperApproximated) {
    // Printed closed forms; the transverse one is not the half-sum of the
    // gammas above (its S_x coefficient reads 3/4 + delta^2/Omega_R^2).
    const double b = delta * delta / wr2;
    const double aa = Omega * Omega / wr2;
    const double inv_t1 = 0.5 * psd.S_x(omega0) + aa * psd.S_z(wr) +
                          b * (0.25 * psd.S_Omega(wr) + 0.5 * psd.S_x(omega0));
    const double inv_t2 = b * psd.S_z(0.0) + 0.25 * aa * (psd.S_Omega(0.0) + 2.0 * psd.S_z(wr)) +
                          0.125 * b * psd.S_Omega(wr) + (0.75 + b) * psd.S_x(omega0);
    r.t1 = 1.0 / inv_t1;
    r.t2 = 1.0 / inv_t2;
    r.t2_pure = 1.0 / (inv_t2 - 0.5 * inv_t1);
  }
  r.gamma_x = a.gamma_u;
  r.gamma_y = a.gamma_v;
  r.gamma_z = a.gamma_w;
  r.frame = Frame::Frame1;
  r.scenario = Scenario::SingleDetuned;
  r.variant = variant;
  return r;
}

DecayRates rates_ccd_amplitude(const NoisePSDSet& psd, double Omega, double eps_m, double omega0,
                               RateVariant variant) {
  psd.validate();
  if (!(Omega > 0.0)) throw InvalidArgument("rates_ccd_amplitude: Omega must be > 0");
  if (eps_m < 0.0) throw InvalidArgument("rates_ccd_amplitude: eps_m must be >= 0");
  const bool collapse = variant != RateVariant::ExactArgument;
  const FramePSDs f = frame2_psds_amplitude_impl(psd, Omega, omega0, collapse);
  // Static axis y, gap eps_m.
  AxisRates a = axis_rates(f, f.S_y, f.S_z, f.S_x, eps_m);
  DecayRates r = assemble(a.gamma_u, a.gamma_v, a.gamma_w);
  if (variant == RateVariant::MainTextSimplified) {
    const double inv_t1 = 0.25 * psd.S_Omega(eps_m) + 0.75 * psd.S_x(omega0) +
                          0.25 * (psd.S_z(Omega - eps_m) + psd.S_z(Omega + eps_m));
    const double inv_t2 = 0.5 * inv_t1 + 0.25 * psd.S_em(0.0) + 0.5 * psd.S_z(Omega) +
                          0.25 * psd.S_x(omega0);
    r.t1 = 1.0 / inv_t1;
    r.t2 = 1.0 / inv_t2;
    r.t2_pure = 1.0 / (inv_t2 - 0.5 * inv_t1);
  }
  r.gamma_y = a.gamma_u;
  r.gamma_z = a.gamma_v;
  r.gamma_x = a.gamma_w;
  r.frame = Frame::Frame2;
  r.scenario = Scenario::CCDAmplitude;
  r.variant = variant;
  // The D.3 expressions degrade when omega_m - eps_m comes within the width
  // of a Lorentzian S_z component.
  const double w = max_lorentzian_rate(psd.S_z);
  r.regime_valid = std::abs(Omega - eps_m) >= 5.0 * w || w == 0.0;
  return r;
}

DecayRates rates_ccd_phase(const NoisePSDSet& psd, double Omega, double eps_m, double omega0,
                           RateVariant variant) {
  psd.validate();
  if (!(Omega > 0.0)) throw InvalidArgument("rates_ccd_phase: Omega must be > 0");
  if (eps_m > Omega)
    throw UnsupportedRegime(
        "rates_ccd_phase: eps_m > Omega is outside the first-order expansion validity");
  if (variant == RateVariant::MainTextSimplified)
    throw InvalidArgument("rates_ccd_phase: no main-text simplified form exists");
  const bool collapse = variant == RateVariant::PaperApproximated;
  const FramePSDs f = frame2_psds_phase_impl(psd, Omega, eps_m, omega0, collapse);
  AxisRates a = axis_rates(f, f.S_y, f.S_z, f.S_x, eps_m);
  DecayRates r = assemble(a.gamma_u, a.gamma_v, a.gamma_w);
  r.gamma_y = a.gamma_u;
  r.gamma_z = a.gamma_v;
  r.gamma_x = a.gamma_w;
  r.frame = Frame::Frame2;
  r.scenario = Scenario::CCDPhase;
  r.variant = variant;
  r.regime_valid = eps_m <= 0.2 * Omega;
  return r;
}

double spinlock_psd_inversion(double rate_1_over_tau, double t1) {
  if (!(t1 > 0.0)) throw InvalidArgument("spinlock_psd_inversion: T1 must be > 0");
  const double floor = 0.5 / t1;
  if (rate_1_over_tau < floor)
    throw InvalidArgument(
        "spinlock_psd_inversion: rate below 1/(2 T1) is inconsistent with the model");
  return rate_1_over_tau - floor;
}

}  // namespace ccdlab
