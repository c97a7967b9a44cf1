#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "stokeswave/types.hpp"

namespace stokes {

namespace detail {

// One evaluation of the conformal series at w = q + i p.
//   z   = z(w) = -w/c + i Y           physical point x + i y
//   dz  = z'(w) = -1/c - S            Jacobian of the inverse map
//   Y   = sum b_n e^{inkw}
//   S   = k sum n b_n e^{inkw}        (dz without its constant term)
// Terms are summed in ascending n; e^{inkw} decays like e^{-nkp} with depth.
struct SeriesEval {
  std::complex<double> z;
  std::complex<double> dz;
  std::complex<double> S;
  std::complex<double> Y;
};

inline SeriesEval eval_series(const StokesWave& w, double q, double p) {
  const double damp = std::exp(-w.k * p);
  const std::complex<double> base = std::polar(damp, w.k * q);
  std::complex<double> t(1.0, 0.0), Y(0.0, 0.0), S(0.0, 0.0);
  for (std::size_t n = 1; n <= w.b.size(); ++n) {
    t *= base;
    Y += w.b[n - 1] * t;
    S += (static_cast<double>(n) * w.k * w.b[n - 1]) * t;
  }
  SeriesEval out;
  out.Y = Y;
  out.S = S;
  out.z = std::complex<double>(-q / w.c - Y.imag(), -p / w.c + Y.real());
  out.dz = std::complex<double>(-1.0 / w.c - S.real(), -S.imag());
  return out;
}

inline double wrap_q(const StokesWave& w, double q) {
  const double P = w.period_q();
  double r = std::fmod(q, P);
  if (r < 0.0) r += P;
  if (r >= P) r = 0.0;
  return r;
}

// Newton iteration for z(w) = target, seeded with the flat-water inverse
// w = -c z.  No fluid-domain test: small negative p (analytic continuation
// slightly above the surface) is allowed, which the physical-space
// trajectory integrator relies on for its intermediate stages.
inline ConformalPoint invert_unchecked(const StokesWave& w, PhysicalPoint target,
                                       std::complex<double> seed,
                                       int max_iter = 50) {
  const std::complex<double> zt(target.x, target.y);
  std::complex<double> ww = seed;
  const double tol = 1e-13 * w.lambda;
  const double accept = 1e-12 * w.lambda;
  double best = std::numeric_limits<double>::infinity();
  std::complex<double> best_w = ww;
  for (int it = 0; it < max_iter; ++it) {
    const SeriesEval ev = eval_series(w, ww.real(), ww.imag());
    const std::complex<double> f = ev.z - zt;
    const double err = std::abs(f);
    if (err < best) {
      best = err;
      best_w = ww;
    }
    if (err <= tol) return ConformalPoint{ww.real(), ww.imag()};
    ww -= f / ev.dz;
  }
  if (best <= accept) return ConformalPoint{best_w.real(), best_w.imag()};
  throw NoConvergence("invert_map: Newton iteration did not converge at (x=" +
                      std::to_string(target.x) + ", y=" + std::to_string(target.y) + ")");
}

inline ConformalPoint invert_unchecked(const StokesWave& w, PhysicalPoint target) {
  return invert_unchecked(w, target,
                          -w.c * std::complex<double>(target.x, target.y));
}

}  // namespace detail

// Physical image of a conformal point.
inline PhysicalPoint map_point(const StokesWave& w, ConformalPoint pt) {
  const detail::SeriesEval ev = detail::eval_series(w, pt.q, pt.p);
  return PhysicalPoint{ev.z.real(), ev.z.imag()};
}

// Velocity and energy densities at a conformal point.  With h' = 1/z'(w),
//   u = c + Re h',  v = -Im h',  E = |h'|^2/2,  E0 = (u^2+v^2)/2.
// The lab velocity is computed from h' + c = -c S / z', which stays accurate
// where u, v are exponentially small.
inline VelocitySample velocity(const StokesWave& w, ConformalPoint pt) {
  const detail::SeriesEval ev = detail::eval_series(w, pt.q, pt.p);
  const double a2 = std::norm(ev.dz);
  if (a2 < 1e-24)
    throw DegenerateJacobian("velocity: |z'(w)| < 1e-12 near (q=" +
                             std::to_string(pt.q) + ", p=" + std::to_string(pt.p) + ")");
  const std::complex<double> W = (-w.c * ev.S) / ev.dz;  // h' + c
  VelocitySample s;
  s.u = W.real();
  s.v = -W.imag();
  s.E = 0.5 / a2;
  s.E0 = 0.5 * std::norm(W);
  return s;
}

// q of the free-surface point with abscissa x (any real; the surface
// x(q, 0) is strictly decreasing across one period).  Safeguarded Newton
// with a bisection bracket, so it converges for every wave.
inline double surface_q_at_x(const StokesWave& w, double x) {
  const double P = w.period_q();
  double xm = std::fmod(x, w.lambda);
  if (xm > 0.0) xm -= w.lambda;
  double lo = 0.0, hi = P;
  double q = std::min(std::max(-w.c * xm, lo), hi);
  for (int it = 0; it < 80; ++it) {
    const detail::SeriesEval ev = detail::eval_series(w, q, 0.0);
    const double fx = ev.z.real() - xm;
    if (std::abs(fx) <= 1e-13 * w.lambda) break;
    (fx > 0.0 ? lo : hi) = q;
    const double dxdq = ev.dz.real();
    double cand = dxdq != 0.0 ? q - fx / dxdq : 0.5 * (lo + hi);
    if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    q = cand;
  }
  return q;
}

// Free-surface elevation above abscissa x.
inline double surface_height_at_x(const StokesWave& w, double x) {
  return map_point(w, ConformalPoint{surface_q_at_x(w, x), 0.0}).y;
}

// Conformal preimage of a physical point.  Result has q in [0, c*lambda) and
// p >= 0; points above the free surface are rejected.
inline ConformalPoint invert_map(const StokesWave& w, PhysicalPoint target) {
  if (target.y > surface_height_at_x(w, target.x) + 1e-10 * w.lambda)
    throw NotInFluid("invert_map: (x=" + std::to_string(target.x) + ", y=" +
                     std::to_string(target.y) + ") lies above the free surface");
  ConformalPoint pt = detail::invert_unchecked(w, target);
  const double floor_tol = 1e-10 * w.period_q();
  if (pt.p < -floor_tol)
    throw NotInFluid("invert_map: (x=" + std::to_string(target.x) + ", y=" +
                     std::to_string(target.y) + ") lies above the free surface");
  if (pt.p < 0.0) pt.p = 0.0;
  pt.q = detail::wrap_q(w, pt.q);
  return pt;
}

// One wavelength of the free surface, crest first (q = 0), equispaced in q.
inline std::vector<PhysicalPoint> surface_profile(const StokesWave& w, int samples) {
  if (samples < 2) throw std::invalid_argument("surface_profile: samples must be >= 2");
  std::vector<PhysicalPoint> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  const double P = w.period_q();
  for (int i = 0; i < samples; ++i)
    pts.push_back(map_point(w, ConformalPoint{P * i / samples, 0.0}));
  return pts;
}

// One period of the streamline p = const in physical space, crest-side first.
inline std::vector<PhysicalPoint> streamline(const StokesWave& w, double p, int samples) {
  if (samples < 2) throw std::invalid_argument("streamline: samples must be >= 2");
  if (!(p >= 0.0)) throw std::invalid_argument("streamline: p must be >= 0");
  std::vector<PhysicalPoint> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  const double P = w.period_q();
  for (int i = 0; i < samples; ++i)
    pts.push_back(map_point(w, ConformalPoint{P * i / samples, p}));
  return pts;
}

// Gauge pressure P - P_atm = B - E - g y (unit density); zero on the surface
// up to the solver residual.
inline double pressure(const StokesWave& w, ConformalPoint pt) {
  const VelocitySample s = velocity(w, pt);
  const PhysicalPoint xy = map_point(w, pt);
  return w.B - s.E - w.gravity * xy.y;
}

// Smallest c - u over a sampling of the fluid (surface plus interior grid).
// Positive for a genuine wave: every particle moves slower than the crest.
inline double speed_margin(const StokesWave& w, int nq = 64, int np = 16) {
  double margin = std::numeric_limits<double>::infinity();
  const double P = w.period_q();
  for (int j = 0; j <= np; ++j) {
    const double p = (j == 0) ? 0.0 : 2.0 * P * j / np;
    for (int i = 0; i < nq; ++i) {
      const VelocitySample s = velocity(w, ConformalPoint{P * i / nq, p});
      margin = std::min(margin, w.c - s.u);
    }
  }
  return margin;
}

struct GridSpec {
  int nq = 64;
  int np = 64;
  double p_min = -1.0;        // < 0: use c*lambda/100
  double p_max = -1.0;        // < 0: use 2*c*lambda
  double fd_step_rel = 1e-4;  // physical-space step, relative to lambda
};

struct GoverningReport {
  double max_curl = 0.0;       // max |u_y - v_x|            [1/s]
  double max_div = 0.0;        // max |u_x + v_y|            [1/s]
  double curl_scale = 0.0;     // c * 2*pi/lambda            [1/s]
  double max_kinematic = 0.0;  // max |v - (u-c) eta_x|      [m/s]
  double max_u_minus_c = 0.0;  // must be negative           [m/s]
  double deep_speed = 0.0;     // max |(u,v)| at p = 5 c*lambda
};

// Discretization-independent residuals of the governing equations:
// irrotationality and incompressibility by centered differences of the
// velocity field in physical coordinates (each sample goes through
// invert_map), the kinematic surface condition against a finite-difference
// surface slope, the bound u < c, and the decay of the velocity at depth.
inline GoverningReport check_governing_equations(const StokesWave& w, GridSpec grid = {}) {
  GoverningReport rep;
  const double P = w.period_q();
  const double p_lo = grid.p_min >= 0.0 ? grid.p_min : 0.01 * P;
  const double p_hi = grid.p_max >= 0.0 ? grid.p_max : 2.0 * P;
  if (!(p_lo > 0.0) || !(p_hi > p_lo))
    throw std::invalid_argument("check_governing_equations: need 0 < p_min < p_max");
  const double h = grid.fd_step_rel * w.lambda;

  auto vel_at = [&](double x, double y) {
    return velocity(w, detail::invert_unchecked(w, PhysicalPoint{x, y}));
  };

  rep.curl_scale = w.c * 2.0 * std::numbers::pi / w.lambda;
  rep.max_u_minus_c = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.np; ++j) {
    const double p = p_lo + (p_hi - p_lo) * j / (grid.np - 1 > 0 ? grid.np - 1 : 1);
    for (int i = 0; i < grid.nq; ++i) {
      const double q = P * i / grid.nq;
      const PhysicalPoint xy = map_point(w, ConformalPoint{q, p});
      const VelocitySample c0 = velocity(w, ConformalPoint{q, p});
      rep.max_u_minus_c = std::max(rep.max_u_minus_c, c0.u - w.c);
      const VelocitySample xp = vel_at(xy.x + h, xy.y);
      const VelocitySample xm = vel_at(xy.x - h, xy.y);
      const VelocitySample yp = vel_at(xy.x, xy.y + h);
      const VelocitySample ym = vel_at(xy.x, xy.y - h);
      const double u_x = (xp.u - xm.u) / (2.0 * h);
      const double u_y = (yp.u - ym.u) / (2.0 * h);
      const double v_x = (xp.v - xm.v) / (2.0 * h);
      const double v_y = (yp.v - ym.v) / (2.0 * h);
      rep.max_curl = std::max(rep.max_curl, std::abs(u_y - v_x));
      rep.max_div = std::max(rep.max_div, std::abs(u_x + v_y));
    }
  }

  // Kinematic condition on the surface: eta_x from centered differences of
  // the parametric curve q -> (x, y)(q, 0), step chosen at the
  // truncation/roundoff balance for the curve slope.
  const double hq = 1e-5 * P;
  for (int i = 0; i < grid.nq; ++i) {
    const double q = P * i / grid.nq;
    const VelocitySample s = velocity(w, ConformalPoint{q, 0.0});
    rep.max_u_minus_c = std::max(rep.max_u_minus_c, s.u - w.c);
    const PhysicalPoint a = map_point(w, ConformalPoint{q - hq, 0.0});
    const PhysicalPoint b = map_point(w, ConformalPoint{q + hq, 0.0});
    const double eta_x = (b.y - a.y) / (b.x - a.x);
    rep.max_kinematic = std::max(rep.max_kinematic,
                                 std::abs(s.v - (s.u - w.c) * eta_x));
  }

  for (int i = 0; i < grid.nq; ++i) {
    const VelocitySample s = velocity(w, ConformalPoint{P * i / grid.nq, 5.0 * P});
    rep.deep_speed = std::max(rep.deep_speed, std::hypot(s.u, s.v));
  }
  return rep;
}

}  // namespace stokes
