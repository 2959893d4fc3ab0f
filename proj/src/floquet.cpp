#include "ccdlab/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ccdlab {

namespace {

constexpr double kUnitaryTol = 1e-8;

double wrap_to_zone(double lambda, double omega_m) {
  while (lambda > 0.5 * omega_m) lambda -= omega_m;
  while (lambda <= -0.5 * omega_m) lambda += omega_m;
  return lambda;
}

// Phase convention: the largest-magnitude component made real positive.
C2 fix_phase(const C2& v) {
  const cplx ref = std::abs(v.a0) >= std::abs(v.a1) ? v.a0 : v.a1;
  if (std::abs(ref) == 0.0) return v;
  const cplx ph = std::conj(ref) / std::abs(ref);
  return {v.a0 * ph, v.a1 * ph};
}

C2 normalized(const C2& v) {
  const double n = v.norm();
  return {v.a0 / n, v.a1 / n};
}

// Eigenvector of u for eigenvalue mu, from the better-conditioned row of u - mu I.
C2 eigenvector(const M2& u, cplx mu) {
  const C2 v1{u.m01, mu - u.m00};
  const C2 v2{mu - u.m11, u.m10};
  const C2 v = v1.norm() >= v2.norm() ? v1 : v2;
  if (v.norm() < 1e-14) return {1.0, 0.0};  // u is (numerically) mu * I
  return normalized(v);
}

}  // namespace

M2 monodromy(const DriveConfig& cfg, int steps_per_period) {
  cfg.validate();
  if (!(cfg.omega_m > 0.0))
    throw InvalidArgument("monodromy: omega_m must be > 0 (periodic drive required)");
  const Frame1Hamiltonian ham(cfg);
  return propagator(ham, 0.0, cfg.period(), steps_per_period, Scheme::CF4);
}

QuasiEnergies quasienergies(const M2& u, double omega_m) {
  if (unitarity_defect(u) > kUnitaryTol)
    throw NumericError("quasienergies: propagator is not unitary to tolerance");
  const double period = two_pi / omega_m;
  const cplx tr = u.trace();
  const cplx s = std::sqrt(tr * tr - 4.0 * u.det());
  const cplx mu1 = 0.5 * (tr + s);
  const cplx mu2 = 0.5 * (tr - s);
  double l1 = wrap_to_zone(-std::arg(mu1) / period, omega_m);
  double l2 = wrap_to_zone(-std::arg(mu2) / period, omega_m);
  if (l1 < l2) std::swap(l1, l2);
  // The pair is defined modulo omega_m; report the representatives with the
  // smaller separation, which is the physical sideband offset. When the
  // eigenphases straddle the zone edge (as they do at the Omega = omega_m
  // resonance) the upper representative leaves the nominal zone.
  if (l1 - l2 > 0.5 * omega_m) {
    const double upper = l2 + omega_m;
    l2 = l1;
    l1 = upper;
  }
  return {l1, l2, l1 - l2};
}

FloquetData floquet_analyze(const DriveConfig& cfg, int n_samples, int steps_per_period) {
  if (n_samples < 2) throw InvalidArgument("floquet_analyze: n_samples must be >= 2");
  cfg.validate();
  if (!(cfg.omega_m > 0.0))
    throw InvalidArgument("floquet_analyze: omega_m must be > 0");
  // Integer substeps between samples keeps the sample times exact.
  const int per_sample = std::max(1, (steps_per_period + n_samples - 1) / n_samples);
  const int steps = per_sample * n_samples;
  const double period = cfg.period();
  const double h = period / steps;

  const Frame1Hamiltonian ham(cfg);
  std::vector<M2> u_at_sample(n_samples);
  M2 u = M2::identity();
  for (int k = 0; k < n_samples; ++k) {
    u_at_sample[k] = u;
    const double t0 = k * per_sample * h;
    u = propagator(ham, t0, t0 + per_sample * h, per_sample, Scheme::CF4) * u;
  }

  FloquetData fd;
  fd.period = period;
  fd.omega_m = cfg.omega_m;
  fd.monodromy = u;
  fd.n_samples = n_samples;

  const QuasiEnergies q = quasienergies(u, cfg.omega_m);
  fd.lambda_plus = q.lambda_plus;
  fd.lambda_minus = q.lambda_minus;
  fd.gap = q.gap;

  const double period_phase_plus = fd.lambda_plus * period;
  const double period_phase_minus = fd.lambda_minus * period;
  C2 v_plus = eigenvector(u, std::polar(1.0, -period_phase_plus));
  C2 v_minus = eigenvector(u, std::polar(1.0, -period_phase_minus));
  // Orthogonality is automatic for distinct eigenvalues of a unitary; for a
  // (near-)degenerate monodromy force it deterministically.
  if (std::abs(inner(v_plus, v_minus)) > 1e-6)
    v_minus = C2{-std::conj(v_plus.a1), std::conj(v_plus.a0)};
  v_plus = fix_phase(v_plus);
  v_minus = fix_phase(v_minus);

  fd.mode_plus.resize(n_samples);
  fd.mode_minus.resize(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double t = k * per_sample * h;
    const cplx ph_plus = std::polar(1.0, fd.lambda_plus * t);
    const cplx ph_minus = std::polar(1.0, fd.lambda_minus * t);
    C2 p = u_at_sample[k] * v_plus;
    C2 m = u_at_sample[k] * v_minus;
    fd.mode_plus[k] = {p.a0 * ph_plus, p.a1 * ph_plus};
    fd.mode_minus[k] = {m.a0 * ph_minus, m.a1 * ph_minus};
  }
  return fd;
}

std::pair<cplx, cplx> mode_decomposition(const QubitState& psi0, const FloquetData& fd) {
  if (fd.mode_plus.empty()) throw InvalidArgument("mode_decomposition: empty FloquetData");
  const C2 v = psi0.c2();
  return {inner(fd.mode_plus[0], v), inner(fd.mode_minus[0], v)};
}

std::vector<double> BandSpectrum::reconstruct(const std::vector<double>& times) const {
  std::vector<double> out(times.size(), 0.0);
  for (const BandLine& line : lines) {
    if (line.freq == 0.0) {
      for (size_t i = 0; i < times.size(); ++i) out[i] += line.amp.real();
    } else {
      for (size_t i = 0; i < times.size(); ++i)
        out[i] += 2.0 * (line.amp * std::polar(1.0, -line.freq * times[i])).real();
    }
  }
  return out;
}

double BandSpectrum::center_weight() const {
  double w = 0.0;
  for (const BandLine& line : lines)
    if (line.family == 0 && line.k >= 1) w += std::norm(line.amp);
  return w;
}

double BandSpectrum::sideband_weight() const {
  double w = 0.0;
  for (const BandLine& line : lines)
    if (line.family != 0) w += std::norm(line.amp);
  return w;
}

BandSpectrum band_spectrum(const FloquetData& fd, const QubitState& psi0, int n_max) {
  if (n_max < 1) throw InvalidArgument("band_spectrum: n_max must be >= 1");
  const int n = fd.n_samples;
  auto [c_plus, c_minus] = mode_decomposition(psi0, fd);

  // Fourier series of phi+-(t) = <0|Phi+-(t)> = sum_m a_m e^{-i m omega_m t}.
  std::vector<cplx> ap(n), am(n);  // index m in [-n/2, n/2), stored mod n
  for (int m = 0; m < n; ++m) {
    cplx sp = 0.0, sm = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx w = std::polar(1.0 / n, two_pi * m * k / n);
      sp += fd.mode_plus[k].a0 * w;
      sm += fd.mode_minus[k].a0 * w;
    }
    ap[m] = sp;
    am[m] = sm;
  }
  const auto coeff = [n](const std::vector<cplx>& a, int m) -> cplx {
    if (m < -n / 2 || m >= n / 2) return 0.0;
    return a[(m % n + n) % n];
  };

  // Accumulate lines keyed by (family, k); fold negative frequencies.
  struct Key {
    int family, k;
    bool operator<(const Key& o) const {
      return family != o.family ? family < o.family : k < o.k;
    }
  };
  std::map<Key, cplx> acc;
  const int half = n / 2;
  const auto add = [&](double freq, cplx amp, int family, int k) {
    if (freq < 0.0) {
      freq = -freq;
      amp = std::conj(amp);
      family = -family;
      k = -k;
    }
    acc[Key{family, k}] += amp;
  };

  const double p2 = std::norm(c_plus), m2 = std::norm(c_minus);
  for (int k = 0; k <= n_max; ++k) {
    cplx ck = 0.0;
    for (int m = -half; m < half; ++m)
      ck += p2 * coeff(ap, m + k) * std::conj(coeff(ap, m)) +
            m2 * coeff(am, m + k) * std::conj(coeff(am, m));
    add(k * fd.omega_m, ck, 0, k);
  }
  const cplx cross = c_plus * std::conj(c_minus);
  for (int k = -n_max; k <= n_max; ++k) {
    cplx dk = 0.0;
    for (int m = -half; m < half; ++m)
      dk += cross * coeff(ap, m + k) * std::conj(coeff(am, m));
    add(k * fd.omega_m + fd.gap, dk, 1, k);
  }

  BandSpectrum bs;
  bs.omega_m = fd.omega_m;
  bs.gap = fd.gap;
  for (const auto& [key, amp] : acc) {
    const double freq = key.family == 0 ? key.k * fd.omega_m
                                        : key.k * fd.omega_m + key.family * fd.gap;
    bs.lines.push_back({freq, amp, key.family, key.k});
  }
  std::sort(bs.lines.begin(), bs.lines.end(),
            [](const BandLine& a, const BandLine& b) { return a.freq < b.freq; });
  return bs;
}

BandSpectrum band_spectrum(const DriveConfig& cfg, const QubitState& psi0, int n_max,
                           int n_samples, int steps_per_period) {
  return band_spectrum(floquet_analyze(cfg, n_samples, steps_per_period), psi0, n_max);
}

std::pair<double, double> mode_control_phases(const QubitState& psi0, const DriveConfig& cfg) {
  const double rel = std::max(std::abs(cfg.delta) / std::max(cfg.Omega, 1.0),
                              std::abs(cfg.omega_m - cfg.Omega) / std::max(cfg.Omega, 1.0));
  if (rel > 1e-9)
    throw UnsupportedRegime(
        "mode_control_phases: requires the synchronization regime delta = 0, omega_m = Omega");
  if (!(cfg.eps_m > 0.0))
    throw UnsupportedRegime("mode_control_phases: eps_m must be > 0");

  // Second-frame static field direction n = (-sin(phi0)cos(phi_m),
  // cos(phi0)cos(phi_m), sin(phi_m)); align it with the Bloch vector of psi0.
  const BlochVector b = bloch(psi0.normalized());
  const double phi_m0 = std::asin(std::clamp(b.z, -1.0, 1.0));
  const double cth = std::hypot(b.x, b.y);
  const double phi00 = cth < 1e-9 ? 0.0 : std::atan2(-b.x, b.y);

  // Bounded polish: shrinking grid descent on |c-|^2 around the analytic
  // solution. Radius is kept small; the geometry is already second-RWA exact.
  const auto objective = [&](double p0, double pm) {
    DriveConfig c = cfg;
    c.phi0 = p0;
    c.phi_m = pm;
    const FloquetData fd = floquet_analyze(c, 64, 1024);
    const auto [cp, cm] = mode_decomposition(psi0, fd);
    return std::min(std::norm(cp), std::norm(cm));
  };

  double best0 = phi00, bestm = phi_m0;
  double best = objective(best0, bestm);
  double radius = 5e-3;
  for (int round = 0; round < 2; ++round) {
    const double r = radius / (round + 1);
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        if (i == 0 && j == 0) continue;
        const double p0 = phi00 + i * r / 2;
        const double pm = phi_m0 + j * r / 2;
        const double v = objective(p0, pm);
        if (v < best) {
          best = v;
          best0 = p0;
          bestm = pm;
        }
      }
    }
  }
  return {best0, bestm};
}

}  // namespace ccdlab
