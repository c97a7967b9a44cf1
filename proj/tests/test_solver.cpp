// Wave solver: exact degenerate cases, frozen regression values, linear-wave
// comparison, self-convergence under refinement, analytic-Jacobian
// verification by finite differences, residual sensitivity, continuation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "stokeswave/stokeswave.hpp"

using namespace stokes;

namespace {

WaveParameters params(double height, int modes = 64) {
  WaveParameters p;
  p.wavelength = 10.0;
  p.wave_height = height;
  p.gravity = 9.8;
  p.modes = modes;
  return p;
}

const StokesWave& wave_tenth() {
  static const StokesWave w = solve_stokes_wave(params(0.1));
  return w;
}

const StokesWave& wave_half() {
  static const StokesWave w = solve_stokes_wave(params(0.5));
  return w;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("flat water is exact and solved without iteration") {
  const StokesWave w = solve_stokes_wave(params(0.0));
  const double c_exact = std::sqrt(9.8 * 10.0 / (2.0 * std::numbers::pi));
  REQUIRE(w.c == c_exact);
  REQUIRE(w.B == 0.5 * c_exact * c_exact);
  REQUIRE(w.k == 2.0 * std::numbers::pi / (w.c * w.lambda));
  REQUIRE(w.modes() == 64);
  for (double bn : w.b) REQUIRE(bn == 0.0);
  REQUIRE(w.residual_norm <= 1e-15);
  REQUIRE(w.steepness == 0.0);
}

TEST_CASE("linear wave has closed-form coefficients") {
  WaveParameters p = params(0.05);
  const StokesWave w = linear_wave(p);
  REQUIRE(w.b[0] == 0.025);
  for (int n = 1; n < w.modes(); ++n) REQUIRE(w.b[static_cast<std::size_t>(n)] == 0.0);
  REQUIRE(w.c == std::sqrt(9.8 * 10.0 / (2.0 * std::numbers::pi)));
  // The reported residual is honest: small but nonzero at second order.
  REQUIRE(w.residual_norm > 0.0);
  REQUIRE(w.residual_norm < 1e-4);
}

TEST_CASE("wavelength chosen for unit speed gives c = 1 exactly") {
  WaveParameters p = params(0.0);
  p.wavelength = 2.0 * std::numbers::pi / 9.8;
  const StokesWave w = solve_stokes_wave(p);
  REQUIRE(w.c == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("low wave stays near the linearization") {
  WaveParameters p = params(0.1, 32);
  const StokesWave w = solve_stokes_wave(p);
  REQUIRE(w.residual_norm <= 1e-12);
  REQUIRE(std::abs(w.b[0] - 0.05) <= 0.01 * 0.1);
  const double c0 = std::sqrt(9.8 * 10.0 / (2.0 * std::numbers::pi));
  // Speed correction is second order in the steepness.
  REQUIRE(rel(w.c, c0) < 1e-3);
  REQUIRE(w.c > c0);
}

TEST_CASE("frozen regression values for the two reference waves") {
  const StokesWave& a = wave_tenth();
  REQUIRE(rel(a.c, 3.95127648074487) < 1e-12);
  REQUIRE(rel(a.b[0], 0.0499259758370027) < 1e-12);
  REQUIRE(a.residual_norm <= 1e-12);

  const StokesWave& w = wave_half();
  REQUIRE(rel(w.c, 3.9983537055933414) < 1e-12);
  REQUIRE(rel(w.B, 8.1809536719954252) < 1e-12);
  REQUIRE(rel(w.b[0], 0.240732518283534) < 1e-12);
  REQUIRE(rel(w.b[1], 0.0368832291825616) < 1e-12);
  REQUIRE(w.residual_norm <= 1e-12);
  REQUIRE(w.k == 2.0 * std::numbers::pi / (w.c * w.lambda));
  REQUIRE(w.steepness == 0.05);
}

TEST_CASE("coefficients decay spectrally") {
  const StokesWave& w = wave_half();
  REQUIRE(std::abs(w.b.back()) < std::abs(w.b[0]));
  REQUIRE(std::abs(w.b.back()) < 1e-12 * std::abs(w.b[0]));
}

TEST_CASE("self-convergence under mode refinement") {
  const StokesWave& w64 = wave_half();
  const StokesWave w96 = solve_stokes_wave(params(0.5, 96));
  REQUIRE(rel(w96.c, w64.c) <= 1e-10);

  const StokesWave w128 = solve_stokes_wave(params(0.5, 128));
  REQUIRE(rel(w128.c, w64.c) <= 1e-9);
  REQUIRE(rel(w128.B, w64.B) <= 1e-9);
  REQUIRE(rel(w128.b[0], w64.b[0]) <= 1e-9);
}

TEST_CASE("surface height constraint and symmetry hold") {
  const StokesWave& w = wave_half();
  const auto prof = surface_profile(w, 512);
  double ymax = prof[0].y, ymin = prof[0].y;
  for (const auto& pt : prof) {
    ymax = std::max(ymax, pt.y);
    ymin = std::min(ymin, pt.y);
  }
  REQUIRE(std::abs((ymax - ymin) - 0.5) <= 1e-10);
  // eta(x) = eta(-x) on a resampled uniform x grid.
  for (int i = 1; i < 16; ++i) {
    const double x = -0.5 * w.lambda * i / 16.0;
    REQUIRE(std::abs(surface_height_at_x(w, x) - surface_height_at_x(w, -x)) <= 1e-10);
  }
}

TEST_CASE("bernoulli residual vanishes for exact and converged waves") {
  const StokesWave flat = solve_stokes_wave(params(0.0));
  for (double r : bernoulli_residual(flat, 256)) REQUIRE(std::abs(r) <= 1e-14);

  const StokesWave& w = wave_half();
  REQUIRE(residual_norm_of(w, 256) <= 1e-12);
  REQUIRE_THROWS_AS(bernoulli_residual(w, 10), std::invalid_argument);
}

TEST_CASE("perturbing a coefficient is detected by the residual") {
  StokesWave w = wave_half();
  w.b[0] += 1e-3;
  REQUIRE(residual_norm_of(w, 256) > 1e-6);
}

TEST_CASE("analytic Jacobian matches finite differences") {
  WaveParameters p = params(0.5, 8);
  const detail::SolverSystem sys(p);
  const StokesWave seed = linear_wave(p);
  const int n = p.modes + 2;
  std::vector<double> X(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < p.modes; ++i) X[static_cast<std::size_t>(i)] = seed.b[static_cast<std::size_t>(i)];
  X[static_cast<std::size_t>(p.modes)] = seed.c;
  X[static_cast<std::size_t>(p.modes + 1)] = seed.B;

  const std::vector<double> J = sys.eval_J(X);
  double worst = 0.0;
  for (int col = 0; col < n; ++col) {
    const double h = 1e-6 * std::max(1.0, std::abs(X[static_cast<std::size_t>(col)]));
    std::vector<double> Xp = X, Xm = X;
    Xp[static_cast<std::size_t>(col)] += h;
    Xm[static_cast<std::size_t>(col)] -= h;
    const std::vector<double> Fp = sys.eval_F(Xp);
    const std::vector<double> Fm = sys.eval_F(Xm);
    for (int row = 0; row < n; ++row) {
      const double fd = (Fp[static_cast<std::size_t>(row)] - Fm[static_cast<std::size_t>(row)]) / (2.0 * h);
      const double an = J[static_cast<std::size_t>(row * n + col)];
      worst = std::max(worst, std::abs(fd - an) / (1.0 + std::abs(an)));
    }
  }
  REQUIRE(worst <= 1e-6);
}

TEST_CASE("steepness cap refuses a direct solve with a continuation hint") {
  REQUIRE_THROWS_AS(solve_stokes_wave(params(3.0)), NoConvergence);
  try {
    solve_stokes_wave(params(3.0));
  } catch (const NoConvergence& e) {
    REQUIRE(std::string(e.what()).find("continuation") != std::string::npos);
  }
}

TEST_CASE("continuation single step equals the direct solve") {
  const std::vector<StokesWave> ws = continuation_sweep(params(0.0), {0.1});
  REQUIRE(ws.size() == 1);
  REQUIRE(rel(ws[0].c, wave_tenth().c) <= 1e-12);
  REQUIRE(rel(ws[0].b[0], wave_tenth().b[0]) <= 1e-12);
}

TEST_CASE("continuation ladder converges with speed increasing in height") {
  const std::vector<StokesWave> ws = continuation_sweep(params(0.0), {0.2, 0.4, 0.6, 0.8});
  REQUIRE(ws.size() == 4);
  for (const StokesWave& w : ws) REQUIRE(w.residual_norm <= 1e-12);
  for (std::size_t i = 1; i < ws.size(); ++i) REQUIRE(ws[i].c > ws[i - 1].c);
}

TEST_CASE("continuation rejects bad height ladders") {
  REQUIRE_THROWS_AS(continuation_sweep(params(0.0), {0.8, 0.4}), std::invalid_argument);
  REQUIRE_THROWS_AS(continuation_sweep(params(0.0), {}), std::invalid_argument);
  REQUIRE_THROWS_AS(continuation_sweep(params(0.0), {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("parameter validation rejects nonsense") {
  WaveParameters p = params(0.1);
  p.wavelength = -1.0;
  REQUIRE_THROWS_AS(solve_stokes_wave(p), std::invalid_argument);
  p = params(-0.1);
  REQUIRE_THROWS_AS(solve_stokes_wave(p), std::invalid_argument);
  p = params(0.1, 0);
  REQUIRE_THROWS_AS(solve_stokes_wave(p), std::invalid_argument);
}
