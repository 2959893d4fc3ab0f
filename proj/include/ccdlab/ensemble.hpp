#pragma once

#include <vector>

#include "ccdlab/analysis.hpp"
#include "ccdlab/evolution.hpp"
#include "ccdlab/model.hpp"

namespace ccdlab {

struct SweepGrid2D {
  std::vector<double> Omega_values;  // rad/s, sorted ascending
  std::vector<double> delta_values;  // rad/s, sorted ascending

  void validate() const;
};

enum class RabiPrefactor {
  /// Omega / sqrt(Omega^2 + delta^2), the form the robustness analysis uses.
  OmegaOverOmegaR,
  /// Omega^2 / (Omega^2 + delta^2), the textbook Rabi population prefactor.
  OmegaSqOverOmegaRSq
};

struct EnsembleOptions {
  int gh_order = 24;  // Gauss-Hermite nodes per inhomogeneity axis
  RabiPrefactor prefactor = RabiPrefactor::OmegaOverOmegaR;
  int threads = 0;
};

/// Ensemble-averaged Rabi oscillation component
///   P(t) = sum_i (c_i/2) Int dxi_O dxi_w f(xi_O, xi_w)
///          pref(O', d'_i) cos(sqrt(O'^2 + d'_i^2) t) e^{-t/tau0},
/// O' = Omega + xi_O, d'_i = delta - offset_i + xi_w, with Gaussian weights
/// of std sigma_Omega = r_Omega Omega and sigma_omega, by tensor
/// Gauss-Hermite quadrature. This is the oscillation-component model (P(0) =
/// sum c_i / 2), not a population bounded to [0, 1].
std::vector<double> ensemble_rabi(double Omega, double delta, const InhomogeneityModel& inhom,
                                  const TimeGrid& grid, const EnsembleOptions& opt = {});

struct CoherencePoint {
  double x = 0.0;    // swept value (rad/s)
  double tau = 0.0;  // fitted coherence time (s)
  bool converged = false;
};

/// tau(Omega) from exponential-damped-cosine fits of ensemble_rabi signals.
/// Fit failures are reported per point; the sweep continues.
std::vector<CoherencePoint> coherence_vs_power(const std::vector<double>& Omega_values,
                                               double delta, const InhomogeneityModel& inhom,
                                               const TimeGrid& fit_window,
                                               const EnsembleOptions& opt = {});

struct ContrastMap {
  std::vector<double> Omega_values, delta_values;
  std::vector<double> c1;  // row-major [i_Omega][i_delta]; NaN on fit failure

  double at(std::size_t i_Omega, std::size_t i_delta) const {
    return c1[i_Omega * delta_values.size() + i_delta];
  }
};

/// Center-band oscillation contrast over a (Omega, delta) grid with the
/// modulation strength tied to the drive (eps_m = rho Omega). Single-spin
/// Floquet shortcut: only the center-band lines of the initial spectrum are
/// kept, mimicking a late measurement window where the sidebands have
/// decayed; the window signal is then fit with c0 + (c1/2)cos(w1 t + phi1).
ContrastMap contrast_map(const DriveConfig& cfg_template, const SweepGrid2D& sweep,
                         const TimeGrid& window, double eps_m_rho,
                         const EnsembleOptions& opt = {});

/// The resonance locus sqrt(Omega^2 + delta^2) = omega_m as (Omega, delta>=0)
/// pairs, for overlaying on the map.
std::vector<std::pair<double, double>> resonance_locus(const std::vector<double>& Omega_values,
                                                       double omega_m);

}  // namespace ccdlab
