#include "ccdlab/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "ccdlab/floquet.hpp"
#include "ccdlab/kernels.hpp"
#include "ccdlab/quadrature.hpp"
#include "ccdlab/threads.hpp"

namespace ccdlab {

void SweepGrid2D::validate() const {
  if (Omega_values.empty() || delta_values.empty())
    throw InvalidArgument("SweepGrid2D: axes must be nonempty");
  if (!std::is_sorted(Omega_values.begin(), Omega_values.end()) ||
      !std::is_sorted(delta_values.begin(), delta_values.end()))
    throw InvalidArgument("SweepGrid2D: axes must be sorted ascending");
}

std::vector<double> ensemble_rabi(double Omega, double delta, const InhomogeneityModel& inhom,
                                  const TimeGrid& grid, const EnsembleOptions& opt) {
  inhom.validate();
  grid.validate();
  if (!(Omega > 0.0)) throw InvalidArgument("ensemble_rabi: Omega must be > 0");
  if (opt.gh_order < 1) throw InvalidArgument("ensemble_rabi: gh_order must be >= 1");

  const double sigma_Omega = inhom.sigma_Omega_rel * Omega;
  // A zero-sigma axis collapses to its single central node.
  const bool quad_O = sigma_Omega > 0.0;
  const bool quad_w = inhom.sigma_omega > 0.0;
  const GaussHermite& gh = gauss_hermite(opt.gh_order);
  const std::vector<double> one_node{0.0}, one_weight{std::sqrt(pi)};
  const auto& nodes_O = quad_O ? gh.nodes : one_node;
  const auto& wts_O = quad_O ? gh.weights : one_weight;
  const auto& nodes_w = quad_w ? gh.nodes : one_node;
  const auto& wts_w = quad_w ? gh.weights : one_weight;

  // Flatten (sublevel, xi_Omega, xi_omega) into weighted cosine terms.
  std::vector<double> w_terms, f_terms;
  w_terms.reserve(3 * nodes_O.size() * nodes_w.size());
  f_terms.reserve(w_terms.capacity());
  const double norm = 1.0 / (std::sqrt(pi) * std::sqrt(pi));  // GH weight normalization
  for (int i = 0; i < 3; ++i) {
    const double ci = inhom.sublevel_populations[i];
    if (ci == 0.0) continue;
    const double di = delta - inhom.sublevel_offsets[i];
    for (std::size_t a = 0; a < nodes_O.size(); ++a) {
      const double Op = Omega + std::sqrt(2.0) * sigma_Omega * nodes_O[a];
      for (std::size_t b = 0; b < nodes_w.size(); ++b) {
        const double dp = di + std::sqrt(2.0) * inhom.sigma_omega * nodes_w[b];
        const double wr = std::sqrt(Op * Op + dp * dp);
        const double pref = opt.prefactor == RabiPrefactor::OmegaOverOmegaR
                                ? (wr > 0.0 ? Op / wr : 1.0)
                                : (wr > 0.0 ? Op * Op / (wr * wr) : 1.0);
        w_terms.push_back(0.5 * ci * norm * wts_O[a] * wts_w[b] * pref);
        f_terms.push_back(wr);
      }
    }
  }

  std::vector<double> p(grid.n_points, 0.0);
  kernels::active_kernels().weighted_cos_accum(w_terms.data(), f_terms.data(), w_terms.size(),
                                               grid.t_start, grid.dt(), p.data(), grid.n_points);
  if (std::isfinite(inhom.tau0)) {
    for (int i = 0; i < grid.n_points; ++i) p[i] *= std::exp(-grid.time(i) / inhom.tau0);
  }
  return p;
}

std::vector<CoherencePoint> coherence_vs_power(const std::vector<double>& Omega_values,
                                               double delta, const InhomogeneityModel& inhom,
                                               const TimeGrid& fit_window,
                                               const EnsembleOptions& opt) {
  std::vector<CoherencePoint> out(Omega_values.size());
  const std::vector<double> times = fit_window.times();
  parallel_for_chunks(static_cast<int>(Omega_values.size()), opt.threads, [&](int i) {
    const double Omega = Omega_values[i];
    CoherencePoint pt;
    pt.x = Omega;
    try {
      const std::vector<double> y = ensemble_rabi(Omega, delta, inhom, fit_window, opt);
      const FitResult f = fit(times, y, FitModel::damped_cosines(1));
      pt.tau = f.components[0].tau;
      pt.converged = f.converged;
    } catch (const Error&) {
      pt.tau = std::numeric_limits<double>::quiet_NaN();
      pt.converged = false;
    }
    out[i] = pt;
  });
  return out;
}

ContrastMap contrast_map(const DriveConfig& cfg_template, const SweepGrid2D& sweep,
                         const TimeGrid& window, double eps_m_rho, const EnsembleOptions& opt) {
  sweep.validate();
  window.validate();
  if (!(eps_m_rho >= 0.0)) throw InvalidArgument("contrast_map: eps_m rule must be >= 0");

  ContrastMap map;
  map.Omega_values = sweep.Omega_values;
  map.delta_values = sweep.delta_values;
  const std::size_t nd = sweep.delta_values.size();
  map.c1.assign(sweep.Omega_values.size() * nd, 0.0);
  const std::vector<double> times = window.times();
  const QubitState psi0 = QubitState::zero();

  parallel_for_chunks(static_cast<int>(sweep.Omega_values.size()), opt.threads, [&](int io) {
    const double Omega = sweep.Omega_values[io];
    for (std::size_t id = 0; id < nd; ++id) {
      double c1 = std::numeric_limits<double>::quiet_NaN();
      try {
        DriveConfig cfg = DriveConfig::from_detuning(
            cfg_template.omega0, sweep.delta_values[id], Omega, eps_m_rho * Omega,
            cfg_template.omega_m, cfg_template.phi0, cfg_template.phi_m,
            cfg_template.modulation);
        const BandSpectrum bs = band_spectrum(cfg, psi0, 4, 128, 1024);
        // Keep the center family only: the late-window signal after the
        // sidebands decayed.
        std::vector<double> y(times.size(), 0.0);
        for (const BandLine& line : bs.lines) {
          if (line.family != 0) continue;
          if (line.freq == 0.0) {
            for (std::size_t i = 0; i < times.size(); ++i) y[i] += line.amp.real();
          } else {
            for (std::size_t i = 0; i < times.size(); ++i)
              y[i] += 2.0 * (line.amp * std::polar(1.0, -line.freq * times[i])).real();
          }
        }
        const WindowContrastResult w = window_contrast(times, y);
        c1 = w.c1;
      } catch (const Error&) {
        // NaN marks the failed grid point; the sweep continues.
      }
      map.c1[io * nd + id] = c1;
    }
  });
  return map;
}

std::vector<std::pair<double, double>> resonance_locus(const std::vector<double>& Omega_values,
                                                       double omega_m) {
  std::vector<std::pair<double, double>> locus;
  for (double Omega : Omega_values) {
    if (Omega <= omega_m)
      locus.emplace_back(Omega, std::sqrt(omega_m * omega_m - Omega * Omega));
  }
  return locus;
}

}  // namespace ccdlab
