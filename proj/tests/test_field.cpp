// Conformal map, velocity field, inversion, pressure, and the
// governing-equation residual report.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

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

const StokesWave& flat() {
  static const StokesWave w = solve_stokes_wave(params(0.0));
  return w;
}

const StokesWave& wave_half() {
  static const StokesWave w = solve_stokes_wave(params(0.5));
  return w;
}

}  // namespace

TEST_CASE("flat-water map is the linear strip map") {
  const StokesWave& w = flat();
  const PhysicalPoint a = map_point(w, ConformalPoint{0.0, w.c});
  REQUIRE(a.x == 0.0);
  REQUIRE(a.y == -1.0);
  const PhysicalPoint b = map_point(w, ConformalPoint{2.0 * w.c, 3.0 * w.c});
  REQUIRE(b.x == Catch::Approx(-2.0).margin(1e-14));
  REQUIRE(b.y == Catch::Approx(-3.0).margin(1e-14));
}

TEST_CASE("advancing q by one conformal period shifts x by minus one wavelength") {
  const StokesWave& w = wave_half();
  const double P = w.period_q();
  std::mt19937 gen(12345);
  std::uniform_real_distribution<double> uq(0.0, P), up(0.0, 2.0 * P);
  for (int i = 0; i < 50; ++i) {
    const double q = uq(gen), p = up(gen);
    const PhysicalPoint a = map_point(w, ConformalPoint{q, p});
    const PhysicalPoint b = map_point(w, ConformalPoint{q + P, p});
    REQUIRE(std::abs((b.x - a.x) + w.lambda) <= 1e-12 * w.lambda);
    REQUIRE(std::abs(b.y - a.y) <= 1e-12 * w.lambda);
  }
}

TEST_CASE("crest height is the plain coefficient sum") {
  const StokesWave& w = wave_half();
  double sum = 0.0;
  for (double bn : w.b) sum += bn;
  REQUIRE(std::abs(map_point(w, ConformalPoint{0.0, 0.0}).y - sum) <= 1e-13);
}

TEST_CASE("flat-water velocity field is at rest") {
  const StokesWave& w = flat();
  for (double p : {0.0, 1.0, 5.0, 40.0}) {
    const VelocitySample s = velocity(w, ConformalPoint{1.7, p});
    REQUIRE(s.u == 0.0);
    REQUIRE(s.v == 0.0);
    REQUIRE(s.E == Catch::Approx(0.5 * w.c * w.c).epsilon(1e-15));
    REQUIRE(s.E0 == 0.0);
  }
}

TEST_CASE("vertical velocity vanishes on the crest and trough verticals") {
  const StokesWave& w = wave_half();
  const double P = w.period_q();
  for (double p : {0.0, 0.3, 1.0, 10.0}) {
    REQUIRE(std::abs(velocity(w, ConformalPoint{0.0, p}).v) <= 1e-13 * w.c);
    REQUIRE(std::abs(velocity(w, ConformalPoint{0.5 * P, p}).v) <= 1e-13 * w.c);
  }
}

TEST_CASE("velocity decays at depth and the energy approaches its still value") {
  const StokesWave& w = wave_half();
  const double P = w.period_q();
  for (double q : {0.0, 0.2 * P, 0.6 * P}) {
    const VelocitySample s = velocity(w, ConformalPoint{q, 5.0 * P});
    REQUIRE(std::abs(s.u) <= 1e-6 * w.c);
    REQUIRE(std::abs(s.v) <= 1e-6 * w.c);
    REQUIRE(std::abs(s.E - 0.5 * w.c * w.c) <= 1e-6 * w.c * w.c);
  }
}

TEST_CASE("mirror symmetry about the crest") {
  const StokesWave& w = wave_half();
  const double P = w.period_q();
  for (int i = 1; i < 8; ++i) {
    const double q = 0.5 * P * i / 8.0;
    for (double p : {0.0, 0.5, 2.0}) {
      const VelocitySample a = velocity(w, ConformalPoint{q, p});
      const VelocitySample b = velocity(w, ConformalPoint{-q, p});
      REQUIRE(std::abs(a.u - b.u) <= 1e-12 * w.c);
      REQUIRE(std::abs(a.v + b.v) <= 1e-12 * w.c);
    }
  }
}

TEST_CASE("vertical velocity has one sign on each half wavelength") {
  const StokesWave& w = wave_half();
  const double P = w.period_q();
  for (double p : {0.0, 0.2, 0.5, 1.0, 2.0}) {
    for (int i = 1; i < 64; ++i) {
      const double q = P * i / 64.0;
      const double x = map_point(w, ConformalPoint{q, p}).x;
      const double v = velocity(w, ConformalPoint{q, p}).v;
      if (x > -0.5 * w.lambda && x < 0.0) {
        REQUIRE(v <= 1e-12 * w.c);  // behind the crest the surface falls
      } else if (x > -w.lambda && x < -0.5 * w.lambda) {
        REQUIRE(v >= -1e-12 * w.c);
      }
    }
  }
}

TEST_CASE("flat-water inversion is the closed form") {
  const StokesWave& w = flat();
  const ConformalPoint cp = invert_map(w, PhysicalPoint{1.0, -2.0});
  REQUIRE(std::abs(cp.p - 2.0 * w.c) <= 1e-12 * w.c);
  const double q_expect = std::fmod(-w.c * 1.0 + w.period_q(), w.period_q());
  REQUIRE(std::abs(cp.q - q_expect) <= 1e-12 * w.period_q());
}

TEST_CASE("inversion round-trips one hundred random in-fluid points") {
  const StokesWave& w = wave_half();
  const double P = w.period_q();
  std::mt19937 gen(777);
  std::uniform_real_distribution<double> uq(0.01 * P, 0.99 * P), up(0.0, 2.0 * P);
  for (int i = 0; i < 100; ++i) {
    const ConformalPoint in{uq(gen), up(gen)};
    const PhysicalPoint xy = map_point(w, in);
    const ConformalPoint out = invert_map(w, xy);
    REQUIRE(std::abs(out.q - in.q) <= 1e-10 * P);
    REQUIRE(std::abs(out.p - in.p) <= 1e-10 * P);
  }
}

TEST_CASE("points above the free surface are rejected") {
  const StokesWave& w = wave_half();
  const double eta0 = surface_height_at_x(w, 0.0);
  REQUIRE_THROWS_AS(invert_map(w, PhysicalPoint{0.0, eta0 + 0.1}), NotInFluid);
  REQUIRE_THROWS_AS(invert_map(w, PhysicalPoint{3.0, 5.0}), NotInFluid);
}

TEST_CASE("surface abscissa lookup inverts the surface parameterization") {
  const StokesWave& w = wave_half();
  for (double x : {0.0, -1.0, -2.5, -7.25, -9.9}) {
    const double q = surface_q_at_x(w, x);
    REQUIRE(std::abs(map_point(w, ConformalPoint{q, 0.0}).x - x) <= 1e-12 * w.lambda);
  }
  // The lookup wraps x into one period.
  REQUIRE(std::abs(surface_q_at_x(w, -2.5 + w.lambda) - surface_q_at_x(w, -2.5)) <=
          1e-10 * w.period_q());
  REQUIRE(std::abs(surface_height_at_x(w, -2.5 - 3.0 * w.lambda) -
                   surface_height_at_x(w, -2.5)) <= 1e-10);
}

TEST_CASE("surface profile spans the prescribed height") {
  const StokesWave& w = wave_half();
  const auto prof = surface_profile(w, 256);
  REQUIRE(prof.size() == 256);
  double ymax = prof[0].y, ymin = prof[0].y;
  for (const auto& pt : prof) {
    ymax = std::max(ymax, pt.y);
    ymin = std::min(ymin, pt.y);
  }
  REQUIRE(std::abs((ymax - ymin) - 0.5) <= 1e-10);
  REQUIRE(prof[0].y == ymax);  // crest first

  const auto two = surface_profile(w, 2);
  REQUIRE(two[0].y == Catch::Approx(ymax).margin(1e-12));
  REQUIRE(two[1].y == Catch::Approx(ymin).margin(1e-12));

  for (const auto& pt : surface_profile(flat(), 64)) REQUIRE(pt.y == 0.0);
  REQUIRE_THROWS_AS(surface_profile(w, 1), std::invalid_argument);
}

TEST_CASE("streamlines flatten with depth") {
  const StokesWave& w = wave_half();
  const auto surf = streamline(w, 0.0, 128);
  const auto prof = surface_profile(w, 128);
  for (std::size_t i = 0; i < surf.size(); ++i) {
    REQUIRE(surf[i].x == prof[i].x);
    REQUIRE(surf[i].y == prof[i].y);
  }

  auto amplitude = [](const std::vector<PhysicalPoint>& pts) {
    double lo = pts[0].y, hi = pts[0].y;
    for (const auto& pt : pts) {
      lo = std::min(lo, pt.y);
      hi = std::max(hi, pt.y);
    }
    return hi - lo;
  };
  REQUIRE(amplitude(streamline(w, 1.0, 128)) < amplitude(surf));

  for (const auto& pt : streamline(flat(), flat().c, 64))
    REQUIRE(pt.y == Catch::Approx(-1.0).margin(1e-14));
}

TEST_CASE("pressure is zero on the surface and hydrostatic in still water") {
  const StokesWave& w = wave_half();
  const double P = w.period_q();
  for (int i = 0; i < 16; ++i) {
    const double gauge = pressure(w, ConformalPoint{P * i / 16.0, 0.0});
    REQUIRE(std::abs(gauge) <= 2.0 * w.residual_norm * w.gravity * w.lambda + 1e-13);
  }
  const StokesWave& still = flat();
  const ConformalPoint two_down{0.7, 2.0 * still.c};
  REQUIRE(pressure(still, two_down) == Catch::Approx(2.0 * 9.8).epsilon(1e-14));
}

TEST_CASE("pressure recovers hydrostatics at depth for a low wave") {
  const StokesWave w = solve_stokes_wave(params(0.01));
  const double P = w.period_q();
  const ConformalPoint deep{0.3 * P, 5.0 * P};
  const double y = map_point(w, deep).y;
  REQUIRE(std::abs(pressure(w, deep) - (-w.gravity * y)) <= 1e-6 * w.gravity * std::abs(y));
}

TEST_CASE("governing-equation residuals vanish on flat water") {
  const GoverningReport rep = check_governing_equations(flat());
  REQUIRE(rep.max_curl == 0.0);
  REQUIRE(rep.max_div == 0.0);
  REQUIRE(rep.max_kinematic == 0.0);
  REQUIRE(rep.deep_speed == 0.0);
  REQUIRE(rep.max_u_minus_c == Catch::Approx(-flat().c).epsilon(1e-15));
}

TEST_CASE("governing-equation residuals are small for the steep wave") {
  const StokesWave& w = wave_half();
  const GoverningReport rep = check_governing_equations(w);
  REQUIRE(rep.curl_scale == Catch::Approx(w.c * 2.0 * std::numbers::pi / w.lambda));
  REQUIRE(rep.max_curl <= 1e-6 * rep.curl_scale);
  REQUIRE(rep.max_div <= 1e-6 * rep.curl_scale);
  REQUIRE(rep.max_kinematic <= 1e-8 * w.c);
  REQUIRE(rep.max_u_minus_c < 0.0);
  REQUIRE(rep.deep_speed <= 1e-6 * w.c);
}

TEST_CASE("the moving frame never stagnates on the sampled grid") {
  const StokesWave& w = wave_half();
  const double margin = speed_margin(w);
  REQUIRE(margin > 0.0);
  // E >= (c-u)^2/2 pointwise, so the grid minimum of E respects the margin.
  const double P = w.period_q();
  double e_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= 16; ++j)
    for (int i = 0; i < 64; ++i)
      e_min = std::min(e_min,
                       velocity(w, ConformalPoint{P * i / 64.0, j == 0 ? 0.0 : 2.0 * P * j / 16.0}).E);
  REQUIRE(e_min >= 0.5 * margin * margin - 1e-15);
}

TEST_CASE("a vanishing map derivative is reported, not divided by") {
  StokesWave w;
  w.lambda = 10.0;
  w.wave_height = 1.0;
  w.gravity = 9.8;
  w.c = 1.0;
  w.k = 2.0 * std::numbers::pi / 10.0;
  w.b = {-10.0 / (2.0 * std::numbers::pi)};  // makes z'(0,0) = 0
  REQUIRE_THROWS_AS(velocity(w, ConformalPoint{0.0, 0.0}), DegenerateJacobian);
}
