#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "stokeswave/field.hpp"
#include "stokeswave/types.hpp"

namespace stokes {

namespace detail {

inline int quad_nodes(const StokesWave& w, int nodes) {
  if (nodes == 0) return 4 * std::max(w.modes(), 1);
  if (nodes < 4 * std::max(w.modes(), 1))
    throw std::invalid_argument("quadrature nodes must be >= 4*modes");
  return nodes;
}

// Periodic trapezoidal mean (1/P) * integral of f over one q-period at
// fixed p; spectrally accurate for the smooth periodic integrands here.
// Summation order is fixed (ascending j), so results are reproducible.
template <class F>
double periodic_mean(const StokesWave& w, int nodes, F&& f) {
  const double P = w.period_q();
  double sum = 0.0;
  for (int j = 0; j < nodes; ++j) sum += f(P * j / nodes);
  return sum / nodes;
}

}  // namespace detail

// Depth-indexed integral mean of the moving-frame energy density:
//   mu_s(p) = (1/(c lambda)) * integral E(q,p)^s dq.
inline double mu_s(const StokesWave& w, double s, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  return detail::periodic_mean(w, M, [&](double q) {
    const detail::SeriesEval ev = detail::eval_series(w, q, p);
    return std::pow(0.5 / std::norm(ev.dz), s);
  });
}

// mu_s^{1/s}; requires s != 0.
inline double mu_s_root(const StokesWave& w, double s, double p, int nodes = 0) {
  if (s == 0.0) throw std::invalid_argument("mu_s_root: s must be nonzero");
  return std::pow(mu_s(w, s, p, nodes), 1.0 / s);
}

// Independent spectral route to mu_1: the surface values of h' = 1/z' are
// expanded in nonnegative modes a_n by a discrete Fourier transform; then
//   mu_1(p) = (1/2) sum |a_n|^2 e^{-2 n k p}.
inline double parseval_mu1(const StokesWave& w, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  const double P = w.period_q();
  std::vector<std::complex<double>> g(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) {
    const detail::SeriesEval ev = detail::eval_series(w, P * j / M, 0.0);
    g[static_cast<std::size_t>(j)] = 1.0 / ev.dz;
  }
  double acc = 0.0;
  for (int n = 0; n <= M / 2; ++n) {
    std::complex<double> a(0.0, 0.0);
    const std::complex<double> step = std::polar(1.0, -2.0 * std::numbers::pi * n / M);
    std::complex<double> ph(1.0, 0.0);
    for (int j = 0; j < M; ++j) {
      a += g[static_cast<std::size_t>(j)] * ph;
      ph *= step;
    }
    a /= static_cast<double>(M);
    acc += std::norm(a) * std::exp(-2.0 * n * w.k * p);
  }
  return 0.5 * acc;
}

// Time for a particle on streamline p to traverse one period:
//   T(p) = integral dq / (2E) = (c lambda / 2) mu_{-1}(p).
inline double streamline_period(const StokesWave& w, double p, int nodes = 0) {
  return 0.5 * w.period_q() * mu_s(w, -1.0, p, nodes);
}

// T(p) - lambda/c without cancellation.  With chi = c k sum n b_n e^{inkw}
// (so z' = -(1 + chi)/c) the integrand identity
//   1/(2E) - 1/c^2 = (2 Re chi + |chi|^2) / c^2
// holds exactly; its quadrature keeps full relative accuracy at depth,
// where the excess itself decays like e^{-2kp}.
inline double period_excess(const StokesWave& w, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  const double mean = detail::periodic_mean(w, M, [&](double q) {
    const detail::SeriesEval ev = detail::eval_series(w, q, p);
    const std::complex<double> chi = w.c * ev.S;
    return 2.0 * chi.real() + std::norm(chi);
  });
  return w.period_q() * mean / (w.c * w.c);
}

// Lab-frame kinetic energy collected along one traversal of streamline p:
//   E_total(p) = (1/2) integral (E0/E) dq.
inline double total_kinetic_energy(const StokesWave& w, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  return 0.5 * w.period_q() * detail::periodic_mean(w, M, [&](double q) {
    const VelocitySample s = velocity(w, ConformalPoint{q, p});
    return s.E0 / s.E;
  });
}

// Same quantity through the algebraically identical form
// (1/2) integral |1 + c z'(w)|^2 dq, evaluated naively as written.
inline double total_kinetic_energy_cross(const StokesWave& w, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  return 0.5 * w.period_q() * detail::periodic_mean(w, M, [&](double q) {
    const detail::SeriesEval ev = detail::eval_series(w, q, p);
    return std::norm(1.0 + w.c * ev.dz);
  });
}

// Generalized lab-frame energy: E_s(p) = 2^{s-2} integral E0^s / E dq.
// s = 0 halves the period; s = 1 is E_total.  For s < 0 the integrand
// grows with depth (E0 -> 0), so the deep values blow up; they are still
// evaluated faithfully.
inline double e_s(const StokesWave& w, double s, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  const double mean = detail::periodic_mean(w, M, [&](double q) {
    const VelocitySample v = velocity(w, ConformalPoint{q, p});
    return std::pow(v.E0, s) / v.E;
  });
  return std::pow(2.0, s - 2.0) * w.period_q() * mean;
}

// Generalized moving-frame energy: Emov_s(p) = 2^{s-2} integral E^{s-1} dq.
inline double emov_s(const StokesWave& w, double s, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  const double mean = detail::periodic_mean(w, M, [&](double q) {
    const detail::SeriesEval ev = detail::eval_series(w, q, p);
    return std::pow(0.5 / std::norm(ev.dz), s - 1.0);
  });
  return std::pow(2.0, s - 2.0) * w.period_q() * mean;
}

// Emov_s through the time-integral route, substituting dt = dq/(2E) into
// (1/2) integral (2E)^s dt.  Agrees with emov_s to rounding.
inline double emov_s_time_route(const StokesWave& w, double s, double p, int nodes = 0) {
  const int M = detail::quad_nodes(w, nodes);
  const double mean = detail::periodic_mean(w, M, [&](double q) {
    const detail::SeriesEval ev = detail::eval_series(w, q, p);
    const double twoE = 1.0 / std::norm(ev.dz);
    return std::pow(twoE, s) / twoE;
  });
  return 0.5 * w.period_q() * mean;
}

// Moving-frame kinetic energy over one traversal; constant c*lambda/2 in
// exact arithmetic, computed honestly as the s = 1 member of emov_s.
inline double total_kinetic_energy_moving(const StokesWave& w, double p, int nodes = 0) {
  return emov_s(w, 1.0, p, nodes);
}

enum class FunctionalKind {
  mu_s,
  mu_s_root,
  T,
  E_total,
  E_total_moving,
  E_s,
  Emov_s,
  drift,
};

inline const char* kind_name(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::mu_s: return "mu_s";
    case FunctionalKind::mu_s_root: return "mu_s_root";
    case FunctionalKind::T: return "T";
    case FunctionalKind::E_total: return "E_total";
    case FunctionalKind::E_total_moving: return "E_total_moving";
    case FunctionalKind::E_s: return "E_s";
    case FunctionalKind::Emov_s: return "Emov_s";
    case FunctionalKind::drift: return "drift";
  }
  return "?";
}

inline bool kind_uses_s(FunctionalKind k) {
  return k == FunctionalKind::mu_s || k == FunctionalKind::mu_s_root ||
         k == FunctionalKind::E_s || k == FunctionalKind::Emov_s;
}

struct FunctionalCurve {
  FunctionalKind kind = FunctionalKind::mu_s;
  double s = 1.0;  // meaningful only when kind_uses_s(kind)
  std::vector<double> p_grid;
  std::vector<double> values;
  int quadrature_nodes = 0;
  std::string wave_id;
};

// Default depth grid: the surface plus 33 log-spaced points from
// c*lambda/1000 to 3 c*lambda.
inline std::vector<double> default_p_grid(const StokesWave& w) {
  const double P = w.period_q();
  std::vector<double> g;
  g.reserve(34);
  g.push_back(0.0);
  const int n = 33;
  const double lo = std::log(1e-3 * P), hi = std::log(3.0 * P);
  for (int i = 0; i < n; ++i)
    g.push_back(std::exp(lo + (hi - lo) * i / (n - 1)));
  return g;
}

inline double evaluate_functional(const StokesWave& w, FunctionalKind kind, double s,
                                  double p, int nodes = 0) {
  switch (kind) {
    case FunctionalKind::mu_s: return mu_s(w, s, p, nodes);
    case FunctionalKind::mu_s_root: return mu_s_root(w, s, p, nodes);
    case FunctionalKind::T: return streamline_period(w, p, nodes);
    case FunctionalKind::E_total: return total_kinetic_energy(w, p, nodes);
    case FunctionalKind::E_total_moving: return total_kinetic_energy_moving(w, p, nodes);
    case FunctionalKind::E_s: return e_s(w, s, p, nodes);
    case FunctionalKind::Emov_s: return emov_s(w, s, p, nodes);
    case FunctionalKind::drift: return w.c * period_excess(w, p, nodes);
  }
  throw std::invalid_argument("evaluate_functional: unknown kind");
}

// Evaluate one functional over a depth grid.  The grid must be nonempty,
// nondecreasing and nonnegative; evaluation errors are rethrown with the
// offending p attached.
inline FunctionalCurve functional_sweep(const StokesWave& w, FunctionalKind kind, double s,
                                        std::vector<double> p_grid, int nodes = 0,
                                        std::string wave_id = {}) {
  if (p_grid.empty()) throw std::invalid_argument("functional_sweep: empty p grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0)) throw std::invalid_argument("functional_sweep: p must be >= 0");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1]))
      throw std::invalid_argument("functional_sweep: p grid must be strictly increasing");
  }
  FunctionalCurve curve;
  curve.kind = kind;
  curve.s = s;
  curve.quadrature_nodes = detail::quad_nodes(w, nodes);
  curve.wave_id = std::move(wave_id);
  curve.values.reserve(p_grid.size());
  for (double p : p_grid) {
    try {
      curve.values.push_back(evaluate_functional(w, kind, s, p, nodes));
    } catch (const std::exception& e) {
      throw std::runtime_error("functional_sweep: " + std::string(kind_name(kind)) +
                               " failed at p=" + std::to_string(p) + ": " + e.what());
    }
  }
  curve.p_grid = std::move(p_grid);
  return curve;
}

}  // namespace stokes
