#include "ccdlab/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccdlab/fftutil.hpp"
#include "ccdlab/su2.hpp"
#include "ccdlab/units.hpp"

namespace ccdlab {

namespace {

struct Bounds {
  double lo, hi;
};

struct Problem {
  FitModel model;
  const std::vector<double>& t;
  const std::vector<double>& y;
  double dt;
  double nyquist;

  int n_params() const { return model.n_params(); }

  Bounds bounds(int i) const {
    const double tau_lo = dt, tau_hi = 1e6 * dt;
    const double w_lo = 1e-9 / (t.back() - t.front() + dt), w_hi = nyquist * (1.0 - 1e-12);
    const double big = 1e300;
    switch (model.kind) {
      case FitModelKind::MultiDampedCosine: {
        if (i == 0) return {-big, big};
        switch ((i - 1) % 4) {
          case 0: return {-big, big};      // c
          case 1: return {tau_lo, tau_hi};  // tau
          case 2: return {w_lo, w_hi};      // omega
          default: return {-big, big};      // phi
        }
      }
      case FitModelKind::StretchedDampedCosine: {
        switch (i) {
          case 0: case 1: return {-big, big};
          case 2: return {tau_lo, tau_hi};
          case 3: return {1e-3, 4.0};  // alpha
          case 4: return {w_lo, w_hi};
          default: return {-big, big};
        }
      }
      case FitModelKind::WindowCosine: {
        switch (i) {
          case 0: case 1: return {-big, big};
          case 2: return {w_lo, w_hi};
          default: return {-big, big};
        }
      }
      case FitModelKind::Exponential: {
        if (i == 2) return {tau_lo, tau_hi};
        return {-big, big};
      }
    }
    return {-big, big};
  }

  void clamp(Eigen::VectorXd& th) const {
    for (int i = 0; i < th.size(); ++i) {
      const Bounds b = bounds(i);
      th[i] = std::min(std::max(th[i], b.lo), b.hi);
    }
  }

  // Model value and gradient row at time ti.
  double eval(const Eigen::VectorXd& th, double ti, double* grad) const {
    switch (model.kind) {
      case FitModelKind::MultiDampedCosine: {
        double v = th[0];
        if (grad) grad[0] = 1.0;
        for (int k = 0; k < model.components; ++k) {
          const double c = th[1 + 4 * k], tau = th[2 + 4 * k], w = th[3 + 4 * k],
                       phi = th[4 + 4 * k];
          const double e = std::exp(-ti / tau);
          const double cs = std::cos(w * ti + phi), sn = std::sin(w * ti + phi);
          v += c * e * cs;
          if (grad) {
            grad[1 + 4 * k] = e * cs;
            grad[2 + 4 * k] = c * e * cs * ti / (tau * tau);
            grad[3 + 4 * k] = -c * e * sn * ti;
            grad[4 + 4 * k] = -c * e * sn;
          }
        }
        return v;
      }
      case FitModelKind::StretchedDampedCosine: {
        const double c0 = th[0], c = th[1], tau = th[2], al = th[3], w = th[4], phi = th[5];
        const double x = ti / tau;
        const double xa = ti > 0.0 ? std::pow(x, al) : 0.0;
        const double e = std::exp(-xa);
        const double cs = std::cos(w * ti + phi), sn = std::sin(w * ti + phi);
        if (grad) {
          grad[0] = 1.0;
          grad[1] = e * cs;
          grad[2] = c * e * cs * al * xa / tau;
          grad[3] = ti > 0.0 ? -c * e * cs * xa * std::log(x) : 0.0;
          grad[4] = -c * e * sn * ti;
          grad[5] = -c * e * sn;
        }
        return c0 + c * e * cs;
      }
      case FitModelKind::WindowCosine: {
        const double c0 = th[0], c1 = th[1], w = th[2], phi = th[3];
        const double cs = std::cos(w * ti + phi), sn = std::sin(w * ti + phi);
        if (grad) {
          grad[0] = 1.0;
          grad[1] = 0.5 * cs;
          grad[2] = -0.5 * c1 * sn * ti;
          grad[3] = -0.5 * c1 * sn;
        }
        return c0 + 0.5 * c1 * cs;
      }
      case FitModelKind::Exponential: {
        const double c0 = th[0], c1 = th[1], tau = th[2];
        const double e = std::exp(-ti / tau);
        if (grad) {
          grad[0] = 1.0;
          grad[1] = e;
          grad[2] = c1 * e * ti / (tau * tau);
        }
        return c0 + c1 * e;
      }
    }
    return 0.0;
  }

  double cost(const Eigen::VectorXd& th) const {
    double s = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
      const double r = y[i] - eval(th, t[i], nullptr);
      s += r * r;
    }
    return s;
  }
};

struct Peak {
  double omega;
  double amp;
  int bin;
};

std::vector<Peak> find_peaks(const HannSpectrum& s, int max_peaks, double rel_threshold) {
  const int n = static_cast<int>(s.mag.size());
  double maxmag = 0.0;
  for (int k = 2; k < n - 2; ++k) maxmag = std::max(maxmag, s.mag[k]);
  if (maxmag <= 0.0) return {};
  std::vector<Peak> peaks;
  for (int k = 2; k < n - 2; ++k) {
    const double m = s.mag[k];
    if (m <= s.mag[k - 1] || m < s.mag[k + 1]) continue;
    if (m < rel_threshold * maxmag) continue;
    // Parabolic interpolation on the log magnitude.
    double delta = 0.0, mag = m;
    if (s.mag[k - 1] > 0.0 && s.mag[k + 1] > 0.0) {
      const double a = std::log(s.mag[k - 1]), b = std::log(m), c = std::log(s.mag[k + 1]);
      const double den = a - 2.0 * b + c;
      if (den < 0.0) {
        delta = 0.5 * (a - c) / den;
        mag = std::exp(b - 0.25 * (a - c) * delta);
      }
    }
    peaks.push_back({s.freq(k) + delta * (s.freq(1) - s.freq(0)), mag * s.amplitude_scale(), k});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.amp > b.amp; });
  // Suppress secondary maxima inside one (padded) Hann main lobe.
  std::vector<Peak> out;
  for (const Peak& p : peaks) {
    bool shadowed = false;
    for (const Peak& q : out)
      if (std::abs(p.bin - q.bin) < 16) shadowed = true;
    if (!shadowed) out.push_back(p);
    if (static_cast<int>(out.size()) >= max_peaks) break;
  }
  return out;
}

// Amplitude/phase of a cosine at omega by complex correlation.
void quadrature_estimate(const std::vector<double>& t, const std::vector<double>& yd, double omega,
                         double& amp, double& phi) {
  cplx z = 0.0;
  for (size_t i = 0; i < t.size(); ++i) z += yd[i] * std::polar(1.0, omega * t[i]);
  z *= 2.0 / static_cast<double>(t.size());
  amp = std::abs(z);
  phi = std::arg(z);
}

double envelope_tau(const std::vector<double>& t, const std::vector<double>& yd) {
  // Log-linear fit through local maxima of |yd|.
  std::vector<double> tt, ll;
  double maxv = 0.0;
  for (double v : yd) maxv = std::max(maxv, std::abs(v));
  if (maxv <= 0.0) return 0.0;
  for (size_t i = 1; i + 1 < yd.size(); ++i) {
    const double a = std::abs(yd[i]);
    if (a >= std::abs(yd[i - 1]) && a >= std::abs(yd[i + 1]) && a > 0.05 * maxv) {
      tt.push_back(t[i]);
      ll.push_back(std::log(a));
    }
  }
  if (tt.size() < 3) return 0.0;
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (size_t i = 0; i < tt.size(); ++i) {
    st += tt[i];
    sl += ll[i];
    stt += tt[i] * tt[i];
    stl += tt[i] * ll[i];
  }
  const double n = static_cast<double>(tt.size());
  const double den = n * stt - st * st;
  if (den <= 0.0) return 0.0;
  const double slope = (n * stl - st * sl) / den;
  if (slope >= -1e-300) return 0.0;
  return -1.0 / slope;
}

Eigen::VectorXd initial_guess(const Problem& prob) {
  const auto& t = prob.t;
  const auto& y = prob.y;
  const int np = prob.n_params();
  Eigen::VectorXd th(np);
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  std::vector<double> yd(y.size());
  for (size_t i = 0; i < y.size(); ++i) yd[i] = y[i] - mean;
  const double span = t.back() - t.front();

  switch (prob.model.kind) {
    case FitModelKind::Exponential: {
      // Baseline from the tail, decay scale from the 1/e crossing.
      const size_t tail = std::max<size_t>(1, y.size() / 10);
      double c0 = 0.0;
      for (size_t i = y.size() - tail; i < y.size(); ++i) c0 += y[i];
      c0 /= tail;
      const double c1 = y.front() - c0;
      double tau = span / 3.0;
      for (size_t i = 0; i < y.size(); ++i) {
        if (std::abs(y[i] - c0) <= std::abs(c1) / std::numbers::e) {
          tau = std::max(t[i] - t.front(), prob.dt);
          break;
        }
      }
      th << c0, c1, tau;
      return th;
    }
    case FitModelKind::WindowCosine: {
      const HannSpectrum s = hann_spectrum(yd, prob.dt);
      const auto peaks = find_peaks(s, 1, 1e-6);
      double w = peaks.empty() ? two_pi / span : peaks[0].omega;
      double amp, phi;
      quadrature_estimate(t, yd, w, amp, phi);
      th << mean, 2.0 * amp, w, phi;
      return th;
    }
    case FitModelKind::StretchedDampedCosine: {
      const HannSpectrum s = hann_spectrum(yd, prob.dt);
      const auto peaks = find_peaks(s, 1, 1e-6);
      const double w = peaks.empty() ? two_pi / span : peaks[0].omega;
      double amp, phi;
      quadrature_estimate(t, yd, w, amp, phi);
      double tau = envelope_tau(t, yd);
      if (tau <= 0.0) tau = span;
      th << mean, std::max(amp, 1e-12), tau, 1.0, w, phi;
      return th;
    }
    case FitModelKind::MultiDampedCosine: {
      const HannSpectrum s = hann_spectrum(yd, prob.dt);
      auto peaks = find_peaks(s, prob.model.components, 1e-6);
      double tau = envelope_tau(t, yd);
      if (tau <= 0.0) tau = span;
      th[0] = mean;
      for (int k = 0; k < prob.model.components; ++k) {
        double w = peaks.size() > static_cast<size_t>(k)
                       ? peaks[k].omega
                       : two_pi * (k + 1) / span * 4.0;
        double amp, phi;
        quadrature_estimate(t, yd, w, amp, phi);
        th[1 + 4 * k] = std::max(amp, 1e-12);
        th[2 + 4 * k] = tau;
        th[3 + 4 * k] = w;
        th[4 + 4 * k] = phi;
      }
      return th;
    }
  }
  th.setZero();
  return th;
}

double wrap_phase(double phi) {
  while (phi > pi) phi -= two_pi;
  while (phi <= -pi) phi += two_pi;
  return phi;
}

FitResult package(const Problem& prob, const Eigen::VectorXd& th, double cost, bool converged,
                  int iters, const Eigen::VectorXd& cov_diag, const std::string& diag) {
  FitResult r;
  r.model = prob.model;
  r.converged = converged;
  r.iterations = iters;
  r.residual_rms = std::sqrt(cost / prob.t.size());
  r.covariance_diagonal.assign(cov_diag.data(), cov_diag.data() + cov_diag.size());
  r.diagnostics = diag;
  switch (prob.model.kind) {
    case FitModelKind::MultiDampedCosine: {
      r.c0 = th[0];
      for (int k = 0; k < prob.model.components; ++k)
        r.components.push_back(
            {th[1 + 4 * k], th[2 + 4 * k], th[3 + 4 * k], wrap_phase(th[4 + 4 * k])});
      break;
    }
    case FitModelKind::StretchedDampedCosine: {
      r.c0 = th[0];
      r.alpha = th[3];
      r.components.push_back({th[1], th[2], th[4], wrap_phase(th[5])});
      break;
    }
    case FitModelKind::WindowCosine: {
      r.c0 = th[0];
      double c1 = th[1], phi = th[3];
      if (c1 < 0.0) {
        c1 = -c1;
        phi += pi;
      }
      r.components.push_back(
          {c1, std::numeric_limits<double>::infinity(), th[2], wrap_phase(phi)});
      break;
    }
    case FitModelKind::Exponential: {
      r.c0 = th[0];
      r.components.push_back({th[1], th[2], 0.0, 0.0});
      break;
    }
  }
  return r;
}

}  // namespace

int FitModel::n_params() const {
  switch (kind) {
    case FitModelKind::MultiDampedCosine: return 1 + 4 * components;
    case FitModelKind::StretchedDampedCosine: return 6;
    case FitModelKind::WindowCosine: return 4;
    case FitModelKind::Exponential: return 3;
  }
  return 0;
}

std::vector<double> FitResult::packed() const {
  std::vector<double> th;
  switch (model.kind) {
    case FitModelKind::MultiDampedCosine:
      th.push_back(c0);
      for (const auto& c : components) {
        th.push_back(c.c);
        th.push_back(c.tau);
        th.push_back(c.omega);
        th.push_back(c.phi);
      }
      break;
    case FitModelKind::StretchedDampedCosine:
      th = {c0, components[0].c, components[0].tau, alpha, components[0].omega,
            components[0].phi};
      break;
    case FitModelKind::WindowCosine:
      th = {c0, components[0].c, components[0].omega, components[0].phi};
      break;
    case FitModelKind::Exponential:
      th = {c0, components[0].c, components[0].tau};
      break;
  }
  return th;
}

FitResult fit(const std::vector<double>& t, const std::vector<double>& y, const FitModel& model,
              const std::optional<std::vector<double>>& hints) {
  if (t.size() != y.size()) throw InvalidArgument("fit: t and y sizes differ");
  if (model.kind == FitModelKind::MultiDampedCosine && model.components < 1)
    throw InvalidArgument("fit: need at least one component");
  const int np = model.n_params();
  if (static_cast<int>(t.size()) < 8 * np)
    throw InvalidArgument("fit: need at least 8 samples per free parameter");
  for (size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw InvalidArgument("fit: times must be strictly increasing");
  const double dt = (t.back() - t.front()) / (t.size() - 1);

  Problem prob{model, t, y, dt, pi / dt};

  Eigen::VectorXd th;
  if (hints) {
    if (static_cast<int>(hints->size()) != np)
      throw InvalidArgument("fit: hint vector has wrong length");
    th = Eigen::Map<const Eigen::VectorXd>(hints->data(), np);
  } else {
    th = initial_guess(prob);
  }
  prob.clamp(th);

  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd J(n, np);
  Eigen::VectorXd r(n), grad_row(np);

  const auto fill = [&](const Eigen::VectorXd& p) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = prob.eval(p, t[i], grad_row.data());
      r[i] = y[i] - v;
      J.row(i) = grad_row;
      c += r[i] * r[i];
    }
    return c;
  };

  double cost = fill(th);
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  const int max_iter = 500;

  // Scale-free gradient measure (MINPACK gtol style): the largest cosine of
  // the angle between a Jacobian column and the residual.
  const auto grad_cosine = [&]() {
    const double rn = r.norm();
    if (rn == 0.0) return 0.0;
    double g = 0.0;
    for (int i = 0; i < np; ++i) {
      const double cn = J.col(i).norm();
      if (cn > 0.0) g = std::max(g, std::abs(J.col(i).dot(r)) / (cn * rn));
    }
    return g;
  };
  // Cost floor where the residual is numerically zero.
  double yscale = 0.0;
  for (double v : y) yscale = std::max(yscale, std::abs(v));
  const double cost_floor = n * std::pow(1e-12 * std::max(yscale, 1e-300), 2);

  for (; iter < max_iter && !converged; ++iter) {
    const Eigen::MatrixXd h = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool stepped = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd a = h;
      for (int i = 0; i < np; ++i) a(i, i) += lambda * std::max(h(i, i), 1e-30);
      const Eigen::VectorXd d = a.ldlt().solve(g);
      Eigen::VectorXd cand = th + d;
      prob.clamp(cand);
      const double cand_cost = prob.cost(cand);
      double rel_step = 0.0;
      for (int i = 0; i < np; ++i)
        rel_step = std::max(rel_step, std::abs(cand[i] - th[i]) / (std::abs(th[i]) + 1e-300));
      if (cand_cost <= cost) {
        const double drop = cost - cand_cost;
        th = cand;
        cost = fill(th);
        lambda = std::max(lambda * 0.33, 1e-14);
        stepped = true;
        if (rel_step < 1e-8 &&
            (grad_cosine() < 1e-8 || cost <= cost_floor || drop <= 1e-14 * (cost + 1e-300)))
          converged = true;
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e14) break;
    }
    if (!stepped) {
      // No descent direction left: at a (numerical) stationary point.
      converged = grad_cosine() < 1e-6 || cost <= cost_floor;
      break;
    }
  }

  // Covariance diagonal: sigma^2 (J^T J)^{-1}.
  Eigen::VectorXd cov_diag = Eigen::VectorXd::Zero(np);
  {
    Eigen::MatrixXd h = J.transpose() * J;
    for (int i = 0; i < np; ++i) h(i, i) += 1e-30;
    const auto ldlt = h.ldlt();
    const double sigma2 = n > np ? cost / (n - np) : 0.0;
    for (int i = 0; i < np; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(np);
      e[i] = 1.0;
      cov_diag[i] = sigma2 * ldlt.solve(e)[i];
    }
  }

  std::string diag;
  if (!converged)
    diag = "fit: no convergence after " + std::to_string(iter) +
           " iterations; returning best-so-far parameters";
  return package(prob, th, cost, converged, iter, cov_diag, diag);
}

WindowContrastResult window_contrast(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 8)
    throw InvalidArgument("window_contrast: need at least 8 samples");
  double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= y.size();
  if (var <= 1e-24 * std::max(1.0, mean * mean)) return {0.0, 0.0, 0.0, false};

  const FitResult f = fit(t, y, FitModel::window_cosine());
  WindowContrastResult r;
  r.c1 = f.components[0].c;
  r.omega1 = f.components[0].omega;
  r.phi1 = f.components[0].phi;
  r.omega_defined = true;
  return r;
}

std::vector<std::pair<double, double>> spectrum_peaks(const std::vector<double>& y, double dt,
                                                      int n_peaks) {
  if (n_peaks < 1) return {};
  // Mean subtraction keeps the DC main lobe (and its sidelobes) out of the
  // peak list.
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  std::vector<double> yd(y.size());
  for (size_t i = 0; i < y.size(); ++i) yd[i] = y[i] - mean;
  const HannSpectrum s = hann_spectrum(yd, dt);
  const auto peaks = find_peaks(s, n_peaks, 1e-6);
  std::vector<std::pair<double, double>> out;
  out.reserve(peaks.size());
  for (const auto& p : peaks) out.emplace_back(p.omega, p.amp);
  return out;
}

}  // namespace ccdlab
