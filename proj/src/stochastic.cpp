#include "ccdlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ccdlab/kernels.hpp"
#include "ccdlab/rng.hpp"
#include "ccdlab/threads.hpp"

namespace ccdlab {

namespace {

constexpr int kLanes = 8;   // trajectories advanced together
constexpr int kChunk = 64;  // trajectories per reduction slot

struct CompiledChannel {
  NoiseTrajectorySpec spec;
  double decay = 0.0;       // OU: e^{-dt/tau_c}
  double innovation = 0.0;  // OU: sigma_eff sqrt(1 - decay^2)
  double sigma_eff = 0.0;   // process amplitude after the PSD bridge
  int hold_steps = 1;       // white: substeps per independent draw
};

struct EnginePlan {
  DriveConfig cfg;
  TimeGrid grid;
  int substeps = 1;       // per grid interval
  double dt = 0.0;        // internal step
  int total_steps = 0;
  std::vector<CompiledChannel> channels;
  // Shared per-substep data (midpoint times).
  std::vector<double> base_x, base_y, base_z;
  std::vector<double> env_amp;    // cos(omega_m t + phi_m), XiEm amplitude route
  std::vector<double> env_slope;  // (omega_m/Omega) sin(omega_m t + phi_m), XiEm phase route
  std::vector<double> rot_cos, rot_sin;  // omega_0 factors for XiX
  bool need_env = false, need_slope = false, need_rot = false;
  // Observable.
  McObservable observable = McObservable::Population0;
  std::vector<M2> obs_transform;  // per grid point; empty when identity
};

void validate_specs(const DriveConfig& cfg, const std::vector<NoiseTrajectorySpec>& specs) {
  std::map<std::pair<int, bool>, int> seen;
  for (const auto& s : specs) {
    s.validate();
    const auto key = std::make_pair(static_cast<int>(s.target), s.is_static());
    if (++seen[key] > 1)
      throw InvalidArgument("mc_signal: duplicate noise target of the same kind");
    if (s.target == NoiseTrajectorySpec::Target::XiX && cfg.phi0 != 0.0)
      throw UnsupportedRegime("mc_signal: xi_x injection is implemented for phi0 = 0 only");
    if (s.target == NoiseTrajectorySpec::Target::XiEm && cfg.modulation == Modulation::None)
      throw InvalidArgument("mc_signal: xi_em requires an active modulation");
  }
}

EnginePlan build_plan(const DriveConfig& cfg, const std::vector<NoiseTrajectorySpec>& specs,
                      const TimeGrid& grid, const McOptions& opt) {
  cfg.validate();
  grid.validate();
  validate_specs(cfg, specs);

  EnginePlan plan;
  plan.cfg = cfg;
  plan.grid = grid;
  plan.observable = opt.observable;

  double wmax = Frame1Hamiltonian(cfg).max_angular_frequency();
  double tau_min = std::numeric_limits<double>::infinity();
  for (const auto& s : specs) {
    if (s.source == NoiseTrajectorySpec::Source::OU) tau_min = std::min(tau_min, s.tau_c);
    if (s.target == NoiseTrajectorySpec::Target::XiX) wmax = std::max(wmax, std::abs(cfg.omega0));
  }
  double dt_max = std::numeric_limits<double>::infinity();
  if (wmax > 0.0) dt_max = two_pi / (50.0 * wmax) * opt.substep_factor;
  if (std::isfinite(tau_min)) dt_max = std::min(dt_max, tau_min / 10.0);
  plan.substeps =
      std::isfinite(dt_max) ? std::max(1, static_cast<int>(std::ceil(grid.dt() / dt_max))) : 1;
  plan.dt = grid.dt() / plan.substeps;
  plan.total_steps = plan.substeps * (grid.n_points - 1);

  for (const auto& s : specs) {
    CompiledChannel ch;
    ch.spec = s;
    switch (s.source) {
      case NoiseTrajectorySpec::Source::OU:
        ch.sigma_eff = std::sqrt(s.variance / 2.0);  // PSD bridge
        ch.decay = std::exp(-plan.dt / s.tau_c);
        ch.innovation = ch.sigma_eff * std::sqrt(1.0 - ch.decay * ch.decay);
        break;
      case NoiseTrajectorySpec::Source::WhiteBandLimited: {
        ch.hold_steps = s.cutoff > 0.0
                            ? std::max(1, static_cast<int>(std::round(pi / (s.cutoff * plan.dt))))
                            : 1;
        const double hold_dt = ch.hold_steps * plan.dt;
        ch.sigma_eff = std::sqrt((s.level / 2.0) / hold_dt);  // PSD bridge
        break;
      }
      case NoiseTrajectorySpec::Source::StaticGaussian:
        ch.sigma_eff = s.sigma;  // physical units, no bridge
        break;
    }
    switch (s.target) {
      case NoiseTrajectorySpec::Target::XiEm:
        if (cfg.modulation == Modulation::Amplitude) plan.need_env = true;
        if (cfg.modulation == Modulation::Phase) plan.need_slope = true;
        break;
      case NoiseTrajectorySpec::Target::XiX:
        plan.need_rot = true;
        break;
      default:
        break;
    }
    plan.channels.push_back(ch);
  }

  const int n = plan.total_steps;
  plan.base_x.resize(n);
  plan.base_y.resize(n);
  plan.base_z.resize(n);
  if (plan.need_env) plan.env_amp.resize(n);
  if (plan.need_slope) plan.env_slope.resize(n);
  if (plan.need_rot) {
    plan.rot_cos.resize(n);
    plan.rot_sin.resize(n);
  }
  for (int k = 0; k < n; ++k) {
    const double t = grid.t_start + (k + 0.5) * plan.dt;
    const PauliCoeffs c = hamiltonian_frame1(cfg, t);
    plan.base_x[k] = c.x;
    plan.base_y[k] = c.y;
    plan.base_z[k] = c.z;
    if (plan.need_env) plan.env_amp[k] = std::cos(cfg.omega_m * t + cfg.phi_m);
    if (plan.need_slope)
      plan.env_slope[k] = (cfg.omega_m / cfg.Omega) * std::sin(cfg.omega_m * t + cfg.phi_m);
    if (plan.need_rot) {
      plan.rot_cos[k] = std::cos(cfg.omega0 * t);
      plan.rot_sin[k] = std::sin(cfg.omega0 * t);
    }
  }

  if (!(opt.observable_frame == Frame::Frame1)) {
    plan.obs_transform.resize(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i)
      plan.obs_transform[i] = frame_change(Frame::Frame1, opt.observable_frame, cfg, grid.time(i));
  }
  return plan;
}

double observe(const EnginePlan& plan, int point, double r0, double i0, double r1, double i1) {
  cplx a0(r0, i0), a1(r1, i1);
  if (!plan.obs_transform.empty()) {
    const M2& u = plan.obs_transform[point];
    const cplx b0 = u.m00 * a0 + u.m01 * a1;
    const cplx b1 = u.m10 * a0 + u.m11 * a1;
    a0 = b0;
    a1 = b1;
  }
  switch (plan.observable) {
    case McObservable::Population0:
      return std::norm(a0);
    case McObservable::BlochX:
      return 2.0 * (std::conj(a0) * a1).real();
    case McObservable::BlochY:
      return 2.0 * (std::conj(a0) * a1).imag();
    case McObservable::BlochZ:
      return std::norm(a0) - std::norm(a1);
  }
  return 0.0;
}

// Per-lane state of one noise channel.
struct LaneChannel {
  Rng rng;
  double value = 0.0;  // coefficient value used this step
  int hold_left = 0;
};

// Runs trajectories [t_begin, t_end) and accumulates sum / sumsq per grid
// point; optionally stores each trajectory's observable series.
void run_block(const EnginePlan& plan, const QubitState& psi0, std::uint64_t base_seed,
               int t_begin, int t_end, std::vector<double>& sum, std::vector<double>& sumsq,
               double* store, int store_stride) {
  const auto& kern = kernels::active_kernels();
  const int n_points = plan.grid.n_points;
  const int n_ch = static_cast<int>(plan.channels.size());

  for (int lane0 = t_begin; lane0 < t_end; lane0 += kLanes) {
    const int lanes = std::min(kLanes, t_end - lane0);
    double re0[kLanes], im0[kLanes], re1[kLanes], im1[kLanes];
    double cx[kLanes], cy[kLanes], cz[kLanes], g[kLanes];
    for (int l = 0; l < lanes; ++l) {
      re0[l] = psi0.a0.real();
      im0[l] = psi0.a0.imag();
      re1[l] = psi0.a1.real();
      im1[l] = psi0.a1.imag();
    }

    std::vector<std::vector<LaneChannel>> ch_state(n_ch);
    for (int c = 0; c < n_ch; ++c) {
      ch_state[c].reserve(lanes);
      for (int l = 0; l < lanes; ++l) {
        const auto& ch = plan.channels[c];
        LaneChannel lc{Rng(stream_seed(base_seed, static_cast<std::uint64_t>(lane0 + l),
                                       static_cast<std::uint64_t>(c), ch.spec.seed)),
                       0.0, 0};
        switch (ch.spec.source) {
          case NoiseTrajectorySpec::Source::OU:
            lc.value = ch.sigma_eff * lc.rng.normal();  // stationary start
            break;
          case NoiseTrajectorySpec::Source::StaticGaussian:
            lc.value = ch.sigma_eff * lc.rng.normal();
            break;
          case NoiseTrajectorySpec::Source::WhiteBandLimited:
            lc.value = ch.sigma_eff * lc.rng.normal();
            lc.hold_left = ch.hold_steps;
            break;
        }
        ch_state[c].push_back(lc);
      }
    }

    // Record t = t_start.
    for (int l = 0; l < lanes; ++l) {
      const double v = observe(plan, 0, re0[l], im0[l], re1[l], im1[l]);
      sum[0] += v;
      sumsq[0] += v * v;
      if (store) store[(lane0 + l) * store_stride + 0] = v;
    }

    int k = 0;  // global substep
    for (int point = 1; point < n_points; ++point) {
      for (int sub = 0; sub < plan.substeps; ++sub, ++k) {
        for (int l = 0; l < lanes; ++l) {
          cx[l] = plan.base_x[k];
          cy[l] = plan.base_y[k];
          cz[l] = plan.base_z[k];
        }
        for (int c = 0; c < n_ch; ++c) {
          const auto& ch = plan.channels[c];
          auto& states = ch_state[c];
          switch (ch.spec.target) {
            case NoiseTrajectorySpec::Target::XiZ:
              if (ch.spec.is_static()) {
                // Static detuning offset: delta -> delta + xi.
                for (int l = 0; l < lanes; ++l) cz[l] -= 0.5 * states[l].value;
              } else {
                for (int l = 0; l < lanes; ++l) cz[l] += states[l].value;
              }
              break;
            case NoiseTrajectorySpec::Target::XiOmega: {
              const double c0 = std::cos(plan.cfg.phi0), s0 = std::sin(plan.cfg.phi0);
              for (int l = 0; l < lanes; ++l) {
                cx[l] += 0.5 * states[l].value * c0;
                cy[l] += 0.5 * states[l].value * s0;
              }
              break;
            }
            case NoiseTrajectorySpec::Target::XiEm: {
              if (plan.cfg.modulation == Modulation::Amplitude) {
                const double c0 = std::cos(plan.cfg.phi0), s0 = std::sin(plan.cfg.phi0);
                const double env = plan.env_amp[k];
                for (int l = 0; l < lanes; ++l) {
                  cx[l] -= states[l].value * env * s0;
                  cy[l] += states[l].value * env * c0;
                }
              } else {
                const double env = plan.env_slope[k];
                for (int l = 0; l < lanes; ++l) cz[l] += states[l].value * env;
              }
              break;
            }
            case NoiseTrajectorySpec::Target::XiX: {
              const double rc = plan.rot_cos[k], rs = plan.rot_sin[k];
              for (int l = 0; l < lanes; ++l) {
                cx[l] += states[l].value * rc;
                cy[l] -= states[l].value * rs;
              }
              break;
            }
          }
          // Advance the channel after use (value held constant over the step).
          switch (ch.spec.source) {
            case NoiseTrajectorySpec::Source::OU: {
              for (int l = 0; l < lanes; ++l) g[l] = states[l].rng.normal();
              for (int l = 0; l < lanes; ++l)
                states[l].value = states[l].value * ch.decay + ch.innovation * g[l];
              break;
            }
            case NoiseTrajectorySpec::Source::WhiteBandLimited: {
              for (int l = 0; l < lanes; ++l) {
                if (--states[l].hold_left <= 0) {
                  states[l].value = ch.sigma_eff * states[l].rng.normal();
                  states[l].hold_left = ch.hold_steps;
                }
              }
              break;
            }
            case NoiseTrajectorySpec::Source::StaticGaussian:
              break;
          }
        }
        kern.su2_step_batch(re0, im0, re1, im1, cx, cy, cz, plan.dt, lanes);
      }
      for (int l = 0; l < lanes; ++l) {
        const double v = observe(plan, point, re0[l], im0[l], re1[l], im1[l]);
        sum[point] += v;
        sumsq[point] += v * v;
        if (store) store[(lane0 + l) * store_stride + point] = v;
      }
    }
  }
}

struct EngineOutput {
  McSignal signal;
  std::vector<double> per_traj;  // row-major [traj][point] when requested
};

EngineOutput run_engine(const DriveConfig& cfg, const std::vector<NoiseTrajectorySpec>& specs,
                        const QubitState& psi0, const TimeGrid& grid, int n_traj,
                        std::uint64_t base_seed, const McOptions& opt, bool store_trajectories) {
  if (n_traj < 1) throw InvalidArgument("mc_signal: n_traj must be >= 1");
  const EnginePlan plan = build_plan(cfg, specs, grid, opt);
  const QubitState psi = psi0.normalized();
  const int n_points = grid.n_points;

  EngineOutput out;
  if (store_trajectories) out.per_traj.assign(static_cast<size_t>(n_traj) * n_points, 0.0);

  const int n_chunks = (n_traj + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> sums(n_chunks), sumsqs(n_chunks);
  parallel_for_chunks(n_chunks, opt.threads, [&](int c) {
    sums[c].assign(n_points, 0.0);
    sumsqs[c].assign(n_points, 0.0);
    const int begin = c * kChunk;
    const int end = std::min(n_traj, begin + kChunk);
    run_block(plan, psi, base_seed, begin, end, sums[c], sumsqs[c],
              store_trajectories ? out.per_traj.data() : nullptr, n_points);
  });

  const std::vector<double> total = pairwise_tree_sum(std::move(sums));
  const std::vector<double> total_sq = pairwise_tree_sum(std::move(sumsqs));

  McSignal& sig = out.signal;
  sig.times = grid.times();
  sig.n_traj = n_traj;
  sig.mean.resize(n_points);
  sig.std_error.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double mean = total[i] / n_traj;
    sig.mean[i] = mean;
    if (n_traj > 1) {
      const double var = std::max(0.0, (total_sq[i] - n_traj * mean * mean) / (n_traj - 1));
      sig.std_error[i] = std::sqrt(var / n_traj);
    } else {
      sig.std_error[i] = 0.0;
    }
  }
  return out;
}

double rate_from_fit(const FitResult& f) {
  if (f.components.empty()) throw FitFailure("mc_decay_rate: fit produced no components");
  const double tau = f.components[0].tau;
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw FitFailure("mc_decay_rate: fitted decay time is not positive");
  return 1.0 / tau;
}

}  // namespace

void NoiseTrajectorySpec::validate() const {
  switch (source) {
    case Source::OU:
      if (!(variance >= 0.0) || !std::isfinite(variance))
        throw InvalidArgument("NoiseTrajectorySpec: OU variance must be finite and >= 0");
      if (!(tau_c > 0.0)) throw InvalidArgument("NoiseTrajectorySpec: OU tau_c must be > 0");
      break;
    case Source::WhiteBandLimited:
      if (!(level >= 0.0)) throw InvalidArgument("NoiseTrajectorySpec: white level must be >= 0");
      if (!(cutoff >= 0.0))
        throw InvalidArgument("NoiseTrajectorySpec: white cutoff must be >= 0");
      break;
    case Source::StaticGaussian:
      if (!(sigma >= 0.0)) throw InvalidArgument("NoiseTrajectorySpec: sigma must be >= 0");
      break;
  }
}

std::vector<double> ou_trajectory(const NoiseTrajectorySpec& spec, double dt, std::size_t n) {
  if (spec.source != NoiseTrajectorySpec::Source::OU)
    throw InvalidArgument("ou_trajectory: spec.source must be OU");
  spec.validate();
  if (!(dt > 0.0)) throw InvalidArgument("ou_trajectory: dt must be > 0");
  std::vector<double> x(n);
  if (n == 0) return x;
  Rng rng(spec.seed);
  const double sigma = std::sqrt(spec.variance);
  const double a = std::exp(-dt / spec.tau_c);
  const double b = sigma * std::sqrt(1.0 - a * a);
  x[0] = sigma * rng.normal();
  for (std::size_t k = 1; k < n; ++k) x[k] = x[k - 1] * a + b * rng.normal();
  return x;
}

McSignal mc_signal(const DriveConfig& cfg, const std::vector<NoiseTrajectorySpec>& specs,
                   const QubitState& psi0, const TimeGrid& grid, int n_traj,
                   std::uint64_t base_seed, const McOptions& opt) {
  return run_engine(cfg, specs, psi0, grid, n_traj, base_seed, opt, false).signal;
}

McRate mc_decay_rate(const DriveConfig& cfg, const std::vector<NoiseTrajectorySpec>& specs,
                     const QubitState& psi0, const TimeGrid& grid, int n_traj,
                     std::uint64_t base_seed, const FitModel& model, const McOptions& opt) {
  EngineOutput eng = run_engine(cfg, specs, psi0, grid, n_traj, base_seed, opt, true);
  const auto& times = eng.signal.times;
  const int n_points = grid.n_points;

  // A signal with no resolvable decay reports a null rate whose half-width
  // reflects the noise floor over the window.
  {
    double lo = eng.signal.mean[0], hi = lo, amp = std::abs(lo);
    std::vector<double> ses = eng.signal.std_error;
    std::nth_element(ses.begin(), ses.begin() + ses.size() / 2, ses.end());
    const double med_se = ses[ses.size() / 2];
    for (double v : eng.signal.mean) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      amp = std::max(amp, std::abs(v));
    }
    if (hi - lo <= std::max(8.0 * med_se, 1e-12)) {
      const double span = times.back() - times.front();
      McRate r;
      r.rate = 0.0;
      r.half_width = std::max(med_se, 1e-12) / (std::max(amp, 1e-3) * span);
      r.fit.model = model;
      r.fit.converged = true;
      r.fit.diagnostics = "mc_decay_rate: no resolvable decay; rate pinned to 0";
      return r;
    }
  }

  FitResult f = fit(times, eng.signal.mean, model);
  if (!f.converged) throw FitFailure("mc_decay_rate: " + f.diagnostics);
  double rate = rate_from_fit(f);

  // One window iteration: refit on the first 3/rate of signal.
  int window = n_points;
  if (rate > 0.0 && std::isfinite(rate)) {
    const double t_cut = grid.t_start + 3.0 / rate;
    int w = n_points;
    for (int i = 0; i < n_points; ++i)
      if (times[i] > t_cut) {
        w = i;
        break;
      }
    if (w >= 8 * model.n_params() && w < n_points) {
      window = w;
      const std::vector<double> tw(times.begin(), times.begin() + window);
      const std::vector<double> yw(eng.signal.mean.begin(), eng.signal.mean.begin() + window);
      const FitResult f2 = fit(tw, yw, model, f.packed());
      if (f2.converged) {
        f = f2;
        rate = rate_from_fit(f2);
      }
    }
  }

  // Bootstrap over trajectories, refitting the resampled means.
  const int n_boot = 20;
  Rng boot_rng(base_seed ^ 0x626F6F7473747261ull);
  std::vector<double> rates;
  std::vector<double> yb(window), tb(times.begin(), times.begin() + window);
  for (int b = 0; b < n_boot; ++b) {
    std::fill(yb.begin(), yb.end(), 0.0);
    for (int k = 0; k < n_traj; ++k) {
      const int idx = static_cast<int>(boot_rng.next_u64() % static_cast<std::uint64_t>(n_traj));
      const double* row = eng.per_traj.data() + static_cast<size_t>(idx) * n_points;
      for (int i = 0; i < window; ++i) yb[i] += row[i];
    }
    for (int i = 0; i < window; ++i) yb[i] /= n_traj;
    try {
      const FitResult fb = fit(tb, yb, model, f.packed());
      if (fb.converged) rates.push_back(rate_from_fit(fb));
    } catch (const Error&) {
      // a failed resample is dropped
    }
  }
  double hw = 0.0;
  if (rates.size() > 1) {
    double mean = 0.0;
    for (double r : rates) mean += r;
    mean /= rates.size();
    double var = 0.0;
    for (double r : rates) var += (r - mean) * (r - mean);
    hw = std::sqrt(var / (rates.size() - 1));
  }
  return {rate, hw, f};
}

}  // namespace ccdlab
