#include "ccdlab/model.hpp"

namespace ccdlab {

bool SpectralFunction::is_zero() const {
  for (const auto& t : terms) {
    if (const auto* w = std::get_if<White>(&t)) {
      if (w->level != 0.0) return false;
    } else if (const auto* l = std::get_if<Lorentzian>(&t)) {
      if (l->variance != 0.0) return false;
    } else if (const auto* s = std::get_if<StaticGaussian>(&t)) {
      if (s->sigma != 0.0) return false;
    }
  }
  return true;
}

void SpectralFunction::validate() const {
  for (const auto& t : terms) {
    if (const auto* w = std::get_if<White>(&t)) {
      if (!(w->level >= 0.0) || !std::isfinite(w->level))
        throw InvalidArgument("SpectralFunction: white level must be finite and >= 0");
    } else if (const auto* l = std::get_if<Lorentzian>(&t)) {
      if (!(l->variance >= 0.0) || !std::isfinite(l->variance))
        throw InvalidArgument("SpectralFunction: Lorentzian variance must be finite and >= 0");
      if (!(l->tau_c > 0.0))
        throw InvalidArgument("SpectralFunction: Lorentzian tau_c must be > 0");
    } else if (const auto* s = std::get_if<StaticGaussian>(&t)) {
      if (!(s->sigma >= 0.0) || !std::isfinite(s->sigma))
        throw InvalidArgument("SpectralFunction: static sigma must be finite and >= 0");
    }
  }
}

double SpectralFunction::operator()(double nu) const {
  double v = 0.0;
  for (const auto& t : terms) {
    if (const auto* w = std::get_if<White>(&t)) {
      v += w->level;
    } else if (const auto* l = std::get_if<Lorentzian>(&t)) {
      v += 2.0 * l->variance * l->tau_c / (1.0 + nu * nu * l->tau_c * l->tau_c);
    } else if (const auto* s = std::get_if<StaticGaussian>(&t)) {
      if (nu == 0.0 && s->sigma != 0.0)
        throw UnsupportedRegime(
            "SpectralFunction: static (zero-frequency) spectral weight has no finite density at "
            "nu = 0; static inhomogeneity must go through the ensemble or stochastic modules");
      // zero everywhere else
    }
  }
  return v;
}

double waveform(const DriveConfig& cfg, double t) {
  cfg.validate();
  switch (cfg.modulation) {
    case Modulation::Amplitude:
      return cfg.Omega * std::cos(cfg.omega * t + cfg.phi0) -
             2.0 * cfg.eps_m * std::sin(cfg.omega * t + cfg.phi0) *
                 std::cos(cfg.omega_m * t + cfg.phi_m);
    case Modulation::Phase:
      return cfg.Omega * std::cos(cfg.omega * t +
                                  (2.0 * cfg.eps_m / cfg.Omega) *
                                      std::cos(cfg.omega_m * t + cfg.phi_m) +
                                  cfg.phi0);
    case Modulation::None:
      return cfg.Omega * std::cos(cfg.omega * t + cfg.phi0);
  }
  throw InvalidArgument("waveform: unknown modulation kind");
}

PauliCoeffs hamiltonian_frame1(const DriveConfig& cfg, double t) {
  const double c0 = std::cos(cfg.phi0), s0 = std::sin(cfg.phi0);
  // Static drive along x~ = (cos phi0, sin phi0, 0).
  PauliCoeffs h{0.5 * cfg.Omega * c0, 0.5 * cfg.Omega * s0, -0.5 * cfg.delta};
  switch (cfg.modulation) {
    case Modulation::None:
      break;
    case Modulation::Amplitude: {
      // Modulation along y~ = (-sin phi0, cos phi0, 0).
      const double m = cfg.eps_m * std::cos(cfg.omega_m * t + cfg.phi_m);
      h.x += -m * s0;
      h.y += m * c0;
      break;
    }
    case Modulation::Phase: {
      if (!(cfg.Omega > 0.0))
        throw InvalidArgument("hamiltonian_frame1: phase modulation requires Omega > 0");
      h.z += cfg.eps_m * (cfg.omega_m / cfg.Omega) * std::sin(cfg.omega_m * t + cfg.phi_m);
      break;
    }
  }
  return h;
}

PauliCoeffs hamiltonian_lab(const DriveConfig& cfg, double t) {
  return {waveform(cfg, t), 0.0, 0.5 * cfg.omega0};
}

}  // namespace ccdlab
