#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "stokeswave/field.hpp"
#include "stokeswave/types.hpp"

namespace stokes {

// Bernoulli residual R(q_j) = E(q_j, 0) + g y(q_j, 0) - B at equispaced
// surface nodes; identically zero for an exact solution.
inline std::vector<double> bernoulli_residual(const StokesWave& w, int samples) {
  if (samples < 2 * std::max(w.modes(), 1))
    throw std::invalid_argument("bernoulli_residual: samples must be >= 2*modes");
  std::vector<double> r(static_cast<std::size_t>(samples));
  const double P = w.period_q();
  for (int j = 0; j < samples; ++j) {
    const detail::SeriesEval ev = detail::eval_series(w, P * j / samples, 0.0);
    const double E = 0.5 / std::norm(ev.dz);
    r[static_cast<std::size_t>(j)] = E + w.gravity * ev.z.imag() - w.B;
  }
  return r;
}

// max |R| over 4N surface nodes, normalized by g*lambda.
inline double residual_norm_of(const StokesWave& w, int samples = 0) {
  if (samples <= 0) samples = 4 * std::max(w.modes(), 1);
  double m = 0.0;
  for (double r : bernoulli_residual(w, samples)) m = std::max(m, std::abs(r));
  return m / (w.gravity * w.lambda);
}

namespace detail {

// Dense LU with partial pivoting; a is n x n row-major, overwritten.
inline std::vector<double> lu_solve(std::vector<double> a, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    double mag = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + col]);
      if (v > mag) { mag = v; best = r; }
    }
    if (mag == 0.0) throw NoConvergence("Newton system is singular");
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[best * n + j]);
      std::swap(rhs[col], rhs[best]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      a[r * n + col] = 0.0;
      for (std::size_t j = col + 1; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t ri = n; ri-- > 0;) {
    double s = rhs[ri];
    for (std::size_t j = ri + 1; j < n; ++j) s -= a[ri * n + j] * rhs[j];
    rhs[ri] = s / a[ri * n + ri];
  }
  return rhs;
}

// The collocation system behind the Newton solve.  Unknowns are
// X = (b_1..b_N, c, B); residuals are the Fourier cosine projections
// (modes 0..N) of the surface Bernoulli residual sampled at M = 4N nodes
// theta_j = 2*pi*j/M (theta = k q, so the node set is independent of c),
// plus the crest-to-trough height constraint.
struct SolverSystem {
  WaveParameters prm;
  int N;
  int M;
  std::vector<double> theta;
  std::vector<double> cos_tab;  // cos(m theta_j), m = 0..N, row-major

  explicit SolverSystem(const WaveParameters& p)
      : prm(p), N(p.modes), M(4 * p.modes) {
    theta.resize(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j)
      theta[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / M;
    cos_tab.resize(static_cast<std::size_t>((N + 1) * M));
    for (int m = 0; m <= N; ++m)
      for (int j = 0; j < M; ++j)
        cos_tab[static_cast<std::size_t>(m * M + j)] =
            std::cos(m * theta[static_cast<std::size_t>(j)]);
  }

  double height_residual(const std::vector<double>& X) const {
    double h = 0.0;
    for (int n = 1; n <= N; n += 2) h += 2.0 * X[static_cast<std::size_t>(n - 1)];
    return h - prm.wave_height;
  }

  // Pointwise surface residual R(theta_j); returns max |R|.
  double pointwise_residual(const std::vector<double>& X, std::vector<double>& R) const {
    const double c = X[static_cast<std::size_t>(N)];
    const double B = X[static_cast<std::size_t>(N + 1)];
    const double k = 2.0 * std::numbers::pi / (c * prm.wavelength);
    R.resize(static_cast<std::size_t>(M));
    double worst = 0.0;
    for (int j = 0; j < M; ++j) {
      const std::complex<double> zeta = std::polar(1.0, theta[static_cast<std::size_t>(j)]);
      std::complex<double> t(1.0, 0.0), Y(0.0, 0.0), Pn(0.0, 0.0);
      for (int n = 1; n <= N; ++n) {
        t *= zeta;
        Y += X[static_cast<std::size_t>(n - 1)] * t;
        Pn += static_cast<double>(n) * X[static_cast<std::size_t>(n - 1)] * t;
      }
      const std::complex<double> zp = std::complex<double>(-1.0 / c, 0.0) - k * Pn;
      const double r = 0.5 / std::norm(zp) + prm.gravity * Y.real() - B;
      R[static_cast<std::size_t>(j)] = r;
      worst = std::max(worst, std::abs(r));
    }
    return worst;
  }

  // Convergence metric: residual normalized by g*lambda and height defect
  // normalized by lambda.
  double metric(const std::vector<double>& X) const {
    std::vector<double> R;
    const double worst = pointwise_residual(X, R);
    return std::max(worst / (prm.gravity * prm.wavelength),
                    std::abs(height_residual(X)) / prm.wavelength);
  }

  // F: mode projections 0..N of R, then the height constraint.  N+2 entries.
  std::vector<double> eval_F(const std::vector<double>& X) const {
    std::vector<double> R;
    pointwise_residual(X, R);
    std::vector<double> F(static_cast<std::size_t>(N + 2), 0.0);
    for (int m = 0; m <= N; ++m) {
      double s = 0.0;
      for (int j = 0; j < M; ++j)
        s += R[static_cast<std::size_t>(j)] * cos_tab[static_cast<std::size_t>(m * M + j)];
      F[static_cast<std::size_t>(m)] = (m == 0 ? 1.0 : 2.0) * s / M;
    }
    F[static_cast<std::size_t>(N + 1)] = height_residual(X);
    return F;
  }

  // Analytic Jacobian of eval_F, row-major (N+2) x (N+2).
  std::vector<double> eval_J(const std::vector<double>& X) const {
    const double c = X[static_cast<std::size_t>(N)];
    const double k = 2.0 * std::numbers::pi / (c * prm.wavelength);
    const int cols = N + 2;
    // Pointwise derivative table dR[j][col].
    std::vector<double> dR(static_cast<std::size_t>(M * cols));
    for (int j = 0; j < M; ++j) {
      const std::complex<double> zeta = std::polar(1.0, theta[static_cast<std::size_t>(j)]);
      std::complex<double> t(1.0, 0.0), Pn(0.0, 0.0);
      std::vector<std::complex<double>> pow(static_cast<std::size_t>(N + 1));
      for (int n = 1; n <= N; ++n) {
        t *= zeta;
        pow[static_cast<std::size_t>(n)] = t;
        Pn += static_cast<double>(n) * X[static_cast<std::size_t>(n - 1)] * t;
      }
      const std::complex<double> zp = std::complex<double>(-1.0 / c, 0.0) - k * Pn;
      const double A = std::norm(zp);
      const double invA2 = 1.0 / (A * A);
      const std::complex<double> zpc = std::conj(zp);
      for (int m = 1; m <= N; ++m) {
        const std::complex<double> dzp = -k * static_cast<double>(m) * pow[static_cast<std::size_t>(m)];
        dR[static_cast<std::size_t>(j * cols + (m - 1))] =
            -(zpc * dzp).real() * invA2 +
            prm.gravity * cos_tab[static_cast<std::size_t>(m * M + j)];
      }
      // d z'/dc = 1/c^2 + (k/c) P  (the nodes theta_j do not move with c).
      const std::complex<double> dzp_c =
          std::complex<double>(1.0 / (c * c), 0.0) + (k / c) * Pn;
      dR[static_cast<std::size_t>(j * cols + N)] = -(zpc * dzp_c).real() * invA2;
      dR[static_cast<std::size_t>(j * cols + N + 1)] = -1.0;
    }
    std::vector<double> J(static_cast<std::size_t>(cols * cols), 0.0);
    for (int m = 0; m <= N; ++m) {
      const double fac = (m == 0 ? 1.0 : 2.0) / M;
      for (int col = 0; col < cols; ++col) {
        double s = 0.0;
        for (int j = 0; j < M; ++j)
          s += dR[static_cast<std::size_t>(j * cols + col)] *
               cos_tab[static_cast<std::size_t>(m * M + j)];
        J[static_cast<std::size_t>(m * cols + col)] = fac * s;
      }
    }
    for (int m = 1; m <= N; m += 2)
      J[static_cast<std::size_t>((N + 1) * cols + (m - 1))] = 2.0;
    return J;
  }
};

inline StokesWave make_wave(const WaveParameters& prm, std::vector<double> b,
                            double c, double B) {
  StokesWave w;
  w.lambda = prm.wavelength;
  w.wave_height = prm.wave_height;
  w.gravity = prm.gravity;
  w.c = c;
  w.B = B;
  w.k = 2.0 * std::numbers::pi / (c * prm.wavelength);
  w.b = std::move(b);
  w.steepness = prm.wave_height / prm.wavelength;
  w.residual_norm = residual_norm_of(w);
  return w;
}

}  // namespace detail

// Exact flat-water solution: deep-water linear dispersion speed, no modes.
inline StokesWave flat_water_wave(const WaveParameters& prm) {
  prm.validate();
  const double c = std::sqrt(prm.gravity * prm.wavelength / (2.0 * std::numbers::pi));
  WaveParameters p0 = prm;
  p0.wave_height = 0.0;
  return detail::make_wave(p0, std::vector<double>(static_cast<std::size_t>(prm.modes), 0.0),
                           c, 0.5 * c * c);
}

// First-order wave: b_1 = H/2 at the linear dispersion speed.  Its residual
// norm is reported honestly, O((H/lambda)^2); it seeds the Newton solve.
inline StokesWave linear_wave(const WaveParameters& prm) {
  prm.validate();
  const double c = std::sqrt(prm.gravity * prm.wavelength / (2.0 * std::numbers::pi));
  std::vector<double> b(static_cast<std::size_t>(prm.modes), 0.0);
  if (prm.modes >= 1) b[0] = 0.5 * prm.wave_height;
  return detail::make_wave(prm, std::move(b), c, 0.5 * c * c);
}

// Newton solve starting from an arbitrary seed wave (used directly by
// continuation; solve_stokes_wave supplies the linear seed).  Steps are
// halved when the residual metric would grow.
inline StokesWave solve_from_seed(const WaveParameters& prm, const StokesWave& seed) {
  prm.validate();
  if (prm.wave_height == 0.0) return flat_water_wave(prm);
  if (!(seed.c > 0.0)) throw std::invalid_argument("solve_from_seed: seed wave speed must be positive");

  const detail::SolverSystem sys(prm);
  const int N = prm.modes;
  std::vector<double> X(static_cast<std::size_t>(N + 2), 0.0);
  for (int n = 0; n < N && n < seed.modes(); ++n)
    X[static_cast<std::size_t>(n)] = seed.b[static_cast<std::size_t>(n)];
  X[static_cast<std::size_t>(N)] = seed.c;
  X[static_cast<std::size_t>(N + 1)] = seed.B;

  double m_cur = sys.metric(X);
  for (int it = 0; it < prm.max_iterations && m_cur > prm.newton_tol; ++it) {
    const std::vector<double> F = sys.eval_F(X);
    std::vector<double> J = sys.eval_J(X);
    std::vector<double> rhs(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) rhs[i] = -F[i];
    const std::vector<double> d = detail::lu_solve(std::move(J), std::move(rhs));

    double alpha = 1.0;
    bool accepted = false;
    for (int half = 0; half < 8; ++half) {
      std::vector<double> Xt = X;
      for (std::size_t i = 0; i < Xt.size(); ++i) Xt[i] += alpha * d[i];
      if (Xt[static_cast<std::size_t>(N)] > 0.0) {
        const double m_try = sys.metric(Xt);
        if (m_try < m_cur || m_try <= prm.newton_tol) {
          X = std::move(Xt);
          m_cur = m_try;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // stalled: fall through to the convergence test
  }

  if (m_cur > prm.newton_tol)
    throw NoConvergence("solve_from_seed: Newton stalled at normalized residual " +
                        std::to_string(m_cur) + " (tol " + std::to_string(prm.newton_tol) +
                        ", H/lambda=" + std::to_string(prm.wave_height / prm.wavelength) + ")");

  std::vector<double> b(X.begin(), X.begin() + N);
  return detail::make_wave(prm, std::move(b), X[static_cast<std::size_t>(N)],
                           X[static_cast<std::size_t>(N + 1)]);
}

// Solve for a wave of given wavelength and crest-to-trough height.  H = 0
// returns the exact flat solution without iterating; H/lambda beyond the
// configured cap is refused (reachable by continuation instead).
inline StokesWave solve_stokes_wave(const WaveParameters& prm) {
  prm.validate();
  if (prm.wave_height == 0.0) return flat_water_wave(prm);
  if (prm.wave_height / prm.wavelength > prm.steepness_cap)
    throw NoConvergence("solve_stokes_wave: steepness H/lambda = " +
                        std::to_string(prm.wave_height / prm.wavelength) +
                        " exceeds the direct-solve cap " + std::to_string(prm.steepness_cap) +
                        "; reach this height with continuation_sweep from a lower wave");
  return solve_from_seed(prm, linear_wave(prm));
}

struct ContinuationFailure : NoConvergence {
  StokesWave last_good;
  double failing_height = 0.0;
  std::vector<StokesWave> converged;
  ContinuationFailure(const std::string& msg, StokesWave last, double h,
                      std::vector<StokesWave> done)
      : NoConvergence(msg), last_good(std::move(last)), failing_height(h),
        converged(std::move(done)) {}
};

// Solve a strictly increasing ladder of heights, each seeded by its
// predecessor.  On failure the exception carries every converged wave,
// the last good one, and the height that failed.
inline std::vector<StokesWave> continuation_sweep(const WaveParameters& prm,
                                                  const std::vector<double>& heights) {
  prm.validate();
  if (heights.empty()) throw std::invalid_argument("continuation_sweep: empty height list");
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (!(heights[i] > 0.0))
      throw std::invalid_argument("continuation_sweep: heights must be positive");
    if (i > 0 && !(heights[i] > heights[i - 1]))
      throw std::invalid_argument("continuation_sweep: heights not strictly increasing");
  }
  if (heights.front() / prm.wavelength > prm.steepness_cap)
    throw std::invalid_argument(
        "continuation_sweep: first height must lie below the direct-solve cap");

  std::vector<StokesWave> waves;
  waves.reserve(heights.size());
  for (std::size_t i = 0; i < heights.size(); ++i) {
    WaveParameters step = prm;
    step.wave_height = heights[i];
    try {
      waves.push_back(i == 0 ? solve_stokes_wave(step)
                             : solve_from_seed(step, waves.back()));
    } catch (const NoConvergence& e) {
      if (waves.empty()) throw;
      StokesWave last = waves.back();
      throw ContinuationFailure(
          "continuation_sweep: no convergence at H=" + std::to_string(heights[i]) +
          " (last good H=" + std::to_string(last.wave_height) + "): " + e.what(),
          std::move(last), heights[i], std::move(waves));
    }
  }
  return waves;
}

}  // namespace stokes
