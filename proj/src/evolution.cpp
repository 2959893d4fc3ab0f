#include "ccdlab/evolution.hpp"

#include <cmath>

namespace ccdlab {

namespace {

constexpr double kSamplesPerPeriod = 50.0;

// Gauss-Legendre nodes and the two-exponential CF4 weights (1/4 -+ sqrt(3)/6).
constexpr double kSqrt3Over6 = 0.28867513459481287;
constexpr double kNode1 = 0.5 - kSqrt3Over6;
constexpr double kNode2 = 0.5 + kSqrt3Over6;
constexpr double kW1 = 0.25 - kSqrt3Over6;
constexpr double kW2 = 0.25 + kSqrt3Over6;

inline void check_finite(const PauliCoeffs& c) {
  if (!std::isfinite(c.x) || !std::isfinite(c.y) || !std::isfinite(c.z))
    throw NumericError("propagate: non-finite Hamiltonian entries");
}

// One integration step of width h starting at time t; returns U(t+h, t).
inline M2 step_unitary(const TimeHamiltonian& ham, double t, double h, Scheme scheme) {
  if (scheme == Scheme::Midpoint) {
    const PauliCoeffs c = ham.coeffs(t + 0.5 * h);
    check_finite(c);
    return su2_exp(c, h);
  }
  const PauliCoeffs c1 = ham.coeffs(t + kNode1 * h);
  const PauliCoeffs c2 = ham.coeffs(t + kNode2 * h);
  check_finite(c1);
  check_finite(c2);
  const PauliCoeffs first = c1 * kW2 + c2 * kW1;   // acts first
  const PauliCoeffs second = c1 * kW1 + c2 * kW2;  // acts second
  return su2_exp(second, h) * su2_exp(first, h);
}

inline int substeps_for(const TimeHamiltonian& ham, double grid_dt, double factor) {
  const double wmax = ham.max_angular_frequency();
  if (!(wmax > 0.0)) return 1;
  const double dt_max = two_pi / (kSamplesPerPeriod * wmax) * factor;
  const int m = static_cast<int>(std::ceil(grid_dt / dt_max));
  return std::max(m, 1);
}

}  // namespace

double Frame1Hamiltonian::max_angular_frequency() const {
  double w = std::max({std::abs(cfg_.delta), cfg_.Omega, cfg_.eps_m});
  if (cfg_.modulation != Modulation::None) {
    w = std::max(w, cfg_.omega_m);
    if (cfg_.modulation == Modulation::Phase && cfg_.Omega > 0.0)
      w = std::max(w, cfg_.eps_m * cfg_.omega_m / cfg_.Omega);
  }
  return w;
}

double LabHamiltonian::max_angular_frequency() const {
  double w = std::max({std::abs(cfg_.omega0), std::abs(cfg_.omega), cfg_.Omega, 2.0 * cfg_.eps_m});
  if (cfg_.modulation != Modulation::None) w = std::max(w, std::abs(cfg_.omega) + cfg_.omega_m);
  return w;
}

Trajectory propagate(const TimeHamiltonian& ham, const QubitState& psi0, const TimeGrid& grid,
                     const PropagateOptions& opt) {
  grid.validate();
  const int m = substeps_for(ham, grid.dt(), opt.substep_factor);
  const double h = grid.dt() / m;

  Trajectory traj;
  traj.grid = grid;
  traj.frame = opt.frame;
  traj.states.resize(grid.n_points);
  traj.states[0] = psi0;

  C2 psi = psi0.c2();
  for (int i = 1; i < grid.n_points; ++i) {
    const double t0 = grid.time(i - 1);
    for (int k = 0; k < m; ++k) psi = step_unitary(ham, t0 + k * h, h, opt.scheme) * psi;
    traj.states[i] = QubitState{psi.a0, psi.a1};
  }
  return traj;
}

M2 propagator(const TimeHamiltonian& ham, double t0, double t1, int n_steps, Scheme scheme) {
  if (n_steps < 1) throw InvalidArgument("propagator: n_steps must be >= 1");
  const double h = (t1 - t0) / n_steps;
  M2 u = M2::identity();
  for (int k = 0; k < n_steps; ++k) u = step_unitary(ham, t0 + k * h, h, scheme) * u;
  return u;
}

std::vector<double> population0(const Trajectory& traj) {
  std::vector<double> p(traj.states.size());
  for (size_t i = 0; i < traj.states.size(); ++i) p[i] = std::norm(traj.states[i].a0);
  return p;
}

M2 frame1_unitary(const DriveConfig& cfg, double t) {
  double phi = 0.5 * cfg.omega * t;
  if (cfg.modulation == Modulation::Phase)
    phi += (cfg.eps_m / cfg.Omega) * std::cos(cfg.omega_m * t + cfg.phi_m);
  return su2_exp(PauliCoeffs{0.0, 0.0, 1.0}, phi);
}

M2 frame2_unitary(const DriveConfig& cfg, double t) {
  const PauliCoeffs x_tilde{std::cos(cfg.phi0), std::sin(cfg.phi0), 0.0};
  return su2_exp(x_tilde, 0.5 * cfg.omega_m * t);
}

namespace {

// Unitary mapping a lab state to `frame` at time t (psi_frame = U^dag psi_lab).
M2 lab_to_frame(Frame frame, const DriveConfig& cfg, double t) {
  switch (frame) {
    case Frame::Lab:
      return M2::identity();
    case Frame::Frame1:
      return frame1_unitary(cfg, t);
    case Frame::Frame2:
      return frame1_unitary(cfg, t) * frame2_unitary(cfg, t);
  }
  throw InvalidArgument("to_frame: unknown frame");
}

}  // namespace

M2 frame_change(Frame from, Frame to, const DriveConfig& cfg, double t) {
  // psi_lab = U_from psi_from; psi_to = U_to^dag psi_lab.
  return lab_to_frame(to, cfg, t).adjoint() * lab_to_frame(from, cfg, t);
}

Trajectory to_frame(const Trajectory& traj, Frame target, const DriveConfig& cfg) {
  if (traj.frame == target)
    throw InvalidArgument("to_frame: source and target frames must differ");
  Trajectory out;
  out.grid = traj.grid;
  out.frame = target;
  out.states.resize(traj.states.size());
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const double t = traj.grid.time(static_cast<int>(i));
    const M2 u = frame_change(traj.frame, target, cfg, t);
    const C2 v = u * traj.states[i].c2();
    out.states[i] = QubitState{v.a0, v.a1};
  }
  return out;
}

}  // namespace ccdlab
