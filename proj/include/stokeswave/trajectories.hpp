#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "stokeswave/field.hpp"
#include "stokeswave/functionals.hpp"
#include "stokeswave/types.hpp"

namespace stokes {

enum class Frame { lab, moving };
enum class PeriodMethod { quadrature, ode_event, surface_integral };

struct ParticlePath {
  std::vector<double> t;
  std::vector<PhysicalPoint> points;  // in `frame`
  Frame frame = Frame::lab;
  double p = 0.0;  // streamline label
  double x0 = 0.0, y0 = 0.0, t0 = 0.0;
};

struct PeriodResult {
  double T = 0.0;
  double p = 0.0;
  double drift = 0.0;  // c*T - lambda
  bool closed = false;
  PeriodMethod method = PeriodMethod::quadrature;
};

struct PathEnergies {
  double T = 0.0;
  double lab_energy = 0.0;     // integral of E0 dt over one traversal
  double moving_energy = 0.0;  // integral of E  dt over one traversal
  double p = 0.0;
};

namespace detail {

// Right-hand side of the reduced motion dq/dt = 2E(q, p) on a streamline.
inline double qdot(const StokesWave& w, double p, double q) {
  const SeriesEval ev = eval_series(w, q, p);
  return 1.0 / std::norm(ev.dz);
}

inline double rk4_step_q(const StokesWave& w, double p, double q, double h) {
  const double k1 = qdot(w, p, q);
  const double k2 = qdot(w, p, q + 0.5 * h * k1);
  const double k3 = qdot(w, p, q + 0.5 * h * k2);
  const double k4 = qdot(w, p, q + h * k3);
  return q + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Conformal preimage of a lab point at time t0, keeping q unnormalized so
// the physical image reproduces the input x exactly (no period wrap).
inline ConformalPoint locate_particle(const StokesWave& w, double x0, double y0, double t0) {
  const double X = x0 - w.c * t0;
  if (y0 > surface_height_at_x(w, X) + 1e-10 * w.lambda)
    throw NotInFluid("particle start (x=" + std::to_string(x0) + ", y=" +
                     std::to_string(y0) + ") lies above the free surface");
  ConformalPoint cp = invert_unchecked(w, PhysicalPoint{X, y0});
  if (cp.p < 0.0) cp.p = 0.0;
  return cp;
}

}  // namespace detail

// Integrate a particle from lab position (x0, y0) at time t0 with classical
// fixed-step RK4 applied to the reduced equation dq/dt = 2E(q, p0).  The path
// stays on its streamline by construction.
inline ParticlePath particle_path(const StokesWave& w, double x0, double y0, double t0,
                                  double duration, double step, Frame frame = Frame::lab) {
  if (!(duration > 0.0) || !(step > 0.0))
    throw std::invalid_argument("particle_path: duration and step must be positive");
  const ConformalPoint start = detail::locate_particle(w, x0, y0, t0);
  const double P = w.period_q();

  ParticlePath path;
  path.frame = frame;
  path.p = start.p;
  path.x0 = x0;
  path.y0 = y0;
  path.t0 = t0;

  auto record = [&](double t, double q) {
    const PhysicalPoint m = map_point(w, ConformalPoint{q, start.p});
    path.t.push_back(t);
    path.points.push_back(frame == Frame::lab ? PhysicalPoint{m.x + w.c * t, m.y} : m);
  };

  double q = start.q;
  double t = t0;
  record(t, q);
  double remaining = duration;
  while (remaining > 0.0) {
    const double h = std::min(step, remaining);
    const double q_next = detail::rk4_step_q(w, start.p, q, h);
    if (std::abs(q_next - q) > P / 8.0)
      throw StepTooLarge("particle_path: q advanced " + std::to_string(q_next - q) +
                         " in one step (limit c*lambda/8 = " + std::to_string(P / 8.0) + ")");
    q = q_next;
    remaining -= h;
    t = (remaining > 0.0) ? t + h : t0 + duration;
    record(t, q);
  }
  return path;
}

// Independent oracle: integrate x' = u(x - ct, y), y' = v(x - ct, y) in
// physical coordinates, inverting the conformal map at every stage (warm-
// started Newton).  Exercises a completely different code path from the
// reduced integrator.
inline ParticlePath particle_path_physical(const StokesWave& w, double x0, double y0,
                                           double t0, double duration, double step,
                                           Frame frame = Frame::lab) {
  if (!(duration > 0.0) || !(step > 0.0))
    throw std::invalid_argument("particle_path_physical: duration and step must be positive");
  const ConformalPoint start = detail::locate_particle(w, x0, y0, t0);
  std::complex<double> w_seed(start.q, start.p);

  auto rhs = [&](double t, double x, double y, double& dx, double& dy) {
    const ConformalPoint cp =
        detail::invert_unchecked(w, PhysicalPoint{x - w.c * t, y}, w_seed);
    w_seed = std::complex<double>(cp.q, cp.p);
    const VelocitySample s = velocity(w, cp);
    dx = s.u;
    dy = s.v;
  };

  ParticlePath path;
  path.frame = frame;
  path.p = start.p;
  path.x0 = x0;
  path.y0 = y0;
  path.t0 = t0;

  auto record = [&](double t, double x, double y) {
    path.t.push_back(t);
    path.points.push_back(frame == Frame::lab ? PhysicalPoint{x, y}
                                              : PhysicalPoint{x - w.c * t, y});
  };

  double x = x0, y = y0, t = t0;
  record(t, x, y);
  double remaining = duration;
  while (remaining > 0.0) {
    const double h = std::min(step, remaining);
    double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
    rhs(t, x, y, k1x, k1y);
    rhs(t + 0.5 * h, x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2x, k2y);
    rhs(t + 0.5 * h, x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3x, k3y);
    rhs(t + h, x + h * k3x, y + h * k3y, k4x, k4y);
    const double dx = h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    const double dy = h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    if (std::hypot(dx, dy) > w.lambda / 8.0)
      throw StepTooLarge("particle_path_physical: displacement " +
                         std::to_string(std::hypot(dx, dy)) +
                         " in one step (limit lambda/8)");
    x += dx;
    y += dy;
    remaining -= h;
    t = (remaining > 0.0) ? t + h : t0 + duration;
    record(t, x, y);
  }
  return path;
}

// Traversal period by simulation: integrate dq/dt = 2E until q has advanced
// one conformal period, locating the crossing by bisection on the final
// step to 1e-12 * c*lambda.  The result is independent of q0 and t0 up to
// integration error.
inline PeriodResult streamline_period_by_simulation(const StokesWave& w, double p,
                                                    double q0 = 0.0, double t0 = 0.0,
                                                    int steps_per_period = 2000) {
  if (steps_per_period < 16)
    throw std::invalid_argument("streamline_period_by_simulation: too few steps");
  const double P = w.period_q();
  const double T_est = streamline_period(w, p);
  const double h = T_est / steps_per_period;

  double q = q0, t = t0;
  const long max_steps = 4L * steps_per_period;
  for (long n = 0; n < max_steps; ++n) {
    const double q_next = detail::rk4_step_q(w, p, q, h);
    if (q_next - q0 >= P) {
      double lo = 0.0, hi = h, mid = h;
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double dq = detail::rk4_step_q(w, p, q, mid) - q0;
        if (std::abs(dq - P) <= 1e-12 * P) break;
        (dq >= P ? hi : lo) = mid;
      }
      PeriodResult res;
      res.T = (t + mid) - t0;
      res.p = p;
      res.drift = w.c * res.T - w.lambda;
      res.closed = std::abs(res.drift) <= 1e-10 * w.lambda;
      res.method = PeriodMethod::ode_event;
      return res;
    }
    q = q_next;
    t += h;
  }
  throw NoConvergence("streamline_period_by_simulation: crossing not reached");
}

// Drift over one traversal, c*T(p) - lambda, evaluated through the
// cancellation-free excess T(p) - lambda/c so the sign is meaningful even
// where the drift has decayed to the round-off floor of c*T.
inline PeriodResult drift(const StokesWave& w, double p, int nodes = 0,
                          double closure_tol_rel = 1e-10) {
  const double excess = period_excess(w, p, nodes);
  PeriodResult res;
  res.T = w.lambda / w.c + excess;
  res.p = p;
  res.drift = w.c * excess;
  res.closed = std::abs(res.drift) <= closure_tol_rel * w.lambda;
  res.method = PeriodMethod::quadrature;
  return res;
}

// Lab and moving kinetic energy accumulated along one simulated traversal:
// the period is located by the ODE event, then E0 and E are integrated in
// time by the trapezoidal rule over exactly one period (spectrally accurate
// for the periodic integrand).
inline PathEnergies path_energies_over_period(const StokesWave& w, double x0, double y0,
                                              double t0, int steps = 2000) {
  const ConformalPoint start = detail::locate_particle(w, x0, y0, t0);
  const PeriodResult per = streamline_period_by_simulation(w, start.p, start.q, t0, steps);
  const double h = per.T / steps;

  auto densities = [&](double q, double& E0, double& E) {
    const VelocitySample s = velocity(w, ConformalPoint{q, start.p});
    E0 = s.E0;
    E = s.E;
  };

  double q = start.q;
  double e0, e;
  densities(q, e0, e);
  double sum_lab = 0.5 * e0, sum_mov = 0.5 * e;
  for (int n = 1; n < steps; ++n) {
    q = detail::rk4_step_q(w, start.p, q, h);
    densities(q, e0, e);
    sum_lab += e0;
    sum_mov += e;
  }
  q = detail::rk4_step_q(w, start.p, q, h);
  densities(q, e0, e);
  sum_lab += 0.5 * e0;
  sum_mov += 0.5 * e;

  PathEnergies out;
  out.T = per.T;
  out.lab_energy = h * sum_lab;
  out.moving_energy = h * sum_mov;
  out.p = start.p;
  return out;
}

}  // namespace stokes
