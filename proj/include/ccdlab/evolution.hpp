#pragma once

#include <memory>
#include <vector>

#include "ccdlab/model.hpp"

namespace ccdlab {

/// Uniform time grid over [t_start, t_end] with n_points samples (n >= 2).
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  int n_points = 0;

  TimeGrid() = default;
  TimeGrid(double t0, double t1, int n) : t_start(t0), t_end(t1), n_points(n) { validate(); }

  void validate() const {
    if (n_points < 2) throw InvalidArgument("TimeGrid: n_points must be >= 2");
    if (!(t_end > t_start)) throw InvalidArgument("TimeGrid: t_end must exceed t_start");
    if (!std::isfinite(t_start) || !std::isfinite(t_end))
      throw InvalidArgument("TimeGrid: non-finite bounds");
  }
  double dt() const { return (t_end - t_start) / (n_points - 1); }
  double time(int i) const { return t_start + i * dt(); }
  std::vector<double> times() const {
    std::vector<double> v(n_points);
    for (int i = 0; i < n_points; ++i) v[i] = time(i);
    return v;
  }
};

enum class Frame { Lab, Frame1, Frame2 };

struct Trajectory {
  TimeGrid grid;
  std::vector<QubitState> states;
  Frame frame = Frame::Frame1;
};

/// Time-dependent traceless Hamiltonian handed to the propagator.
class TimeHamiltonian {
 public:
  virtual ~TimeHamiltonian() = default;
  virtual PauliCoeffs coeffs(double t) const = 0;
  /// Largest angular frequency in the generator (field strengths and
  /// time-dependence rates); sets the internal substep via
  /// dt <= 1/(50 f_max) with f_max = this / 2pi.
  virtual double max_angular_frequency() const = 0;
};

class Frame1Hamiltonian final : public TimeHamiltonian {
 public:
  explicit Frame1Hamiltonian(const DriveConfig& cfg) : cfg_(cfg) { cfg_.validate(); }
  PauliCoeffs coeffs(double t) const override { return hamiltonian_frame1(cfg_, t); }
  double max_angular_frequency() const override;
  const DriveConfig& config() const { return cfg_; }

 private:
  DriveConfig cfg_;
};

class LabHamiltonian final : public TimeHamiltonian {
 public:
  explicit LabHamiltonian(const DriveConfig& cfg) : cfg_(cfg) { cfg_.validate(); }
  PauliCoeffs coeffs(double t) const override { return hamiltonian_lab(cfg_, t); }
  double max_angular_frequency() const override;
  const DriveConfig& config() const { return cfg_; }

 private:
  DriveConfig cfg_;
};

enum class Scheme {
  Midpoint,  // exact exponential of the midpoint Hamiltonian, order 2
  CF4        // two-exponential commutator-free Magnus, order 4
};

struct PropagateOptions {
  Scheme scheme = Scheme::CF4;
  /// Extra refinement on top of the 50-samples-per-fastest-period rule.
  double substep_factor = 1.0;
  /// Bookkeeping tag stored on the returned trajectory.
  Frame frame = Frame::Frame1;
};

/// Unitary fixed-step integration of i d|psi>/dt = H(t)|psi>; returns the
/// state at every grid point. Substeps internally whenever the grid is
/// coarser than the fastest frequency allows.
Trajectory propagate(const TimeHamiltonian& h, const QubitState& psi0, const TimeGrid& grid,
                     const PropagateOptions& opt = {});

/// One-off propagator over [t0, t1]; also usable to accumulate U(t1, t0).
M2 propagator(const TimeHamiltonian& h, double t0, double t1, int n_steps, Scheme scheme = Scheme::CF4);

std::vector<double> population0(const Trajectory& traj);

/// Frame-map unitaries. States transform as |psi_frame> = U^dag |psi_lab>.
/// For phase modulation the frame-1 map carries the constant
/// (eps_m/Omega)cos(phi_m) z-phase required to reproduce the standard
/// frame-1 Hamiltonian, so U0(0) is a z-rotation rather than the identity.
M2 frame1_unitary(const DriveConfig& cfg, double t);
/// Second frame, defined against frame 1: rotation about the frame-1 static
/// axis x~ at omega_m.
M2 frame2_unitary(const DriveConfig& cfg, double t);

/// Unitary taking a state expressed in `from` to `to` at time t:
/// |psi_to> = frame_change(from, to, cfg, t) |psi_from>.
M2 frame_change(Frame from, Frame to, const DriveConfig& cfg, double t);

/// Pointwise exact frame change of a sampled trajectory.
Trajectory to_frame(const Trajectory& traj, Frame target, const DriveConfig& cfg);

}  // namespace ccdlab
