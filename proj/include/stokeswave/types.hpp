#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stokes {

// Conformal coordinates (q, p): q runs along streamlines, p labels them.
// p = 0 is the free surface and p -> +infinity is the deep fluid; one
// conformal period in q has length c*lambda.
struct ConformalPoint {
  double q = 0.0;
  double p = 0.0;
};

struct PhysicalPoint {
  double x = 0.0;
  double y = 0.0;
};

// Lab-frame velocity (u, v) together with the two kinetic-energy densities:
//   E  = ((u - c)^2 + v^2) / 2   moving frame
//   E0 = (u^2 + v^2) / 2         lab frame
struct VelocitySample {
  double u = 0.0;
  double v = 0.0;
  double E = 0.0;
  double E0 = 0.0;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInFluid : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonpositiveValue : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingSurfacePoint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TooFewPoints : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WaveParameters {
  double wavelength = 10.0;     // [m]
  double wave_height = 0.0;     // crest-to-trough H [m]
  double gravity = 9.8;         // [m/s^2]
  int modes = 64;               // Fourier truncation N
  double newton_tol = 1e-12;    // residual tolerance, normalized by g*lambda
  int max_iterations = 50;
  double steepness_cap = 0.10;  // largest H/lambda solvable from a linear seed

  void validate() const {
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    if (!(wave_height >= 0.0)) throw std::invalid_argument("wave_height must be nonnegative");
    if (!(gravity > 0.0)) throw std::invalid_argument("gravity must be positive");
    if (modes < 1) throw std::invalid_argument("modes must be >= 1");
    if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be positive");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  }
};

// A steady deep-water wave in conformal variables.  The inverse map from the
// strip to the fluid is
//   z(w) = -w/c + sum_{n=1..N} i b_n exp(i n k w),   w = q + i p,
// with k = 2*pi/(c*lambda), so z(w + c*lambda) = z(w) - lambda: advancing q by
// one conformal period shifts x by exactly -lambda and leaves y unchanged.
// Real b_n place the crest at q = 0 and make the profile even about it.
struct StokesWave {
  double lambda = 0.0;       // wavelength [m]
  double wave_height = 0.0;  // crest-to-trough H [m]
  double gravity = 9.8;      // [m/s^2]
  double c = 0.0;            // wave speed [m/s]
  double B = 0.0;            // Bernoulli constant [m^2/s^2]
  double k = 0.0;            // conformal wavenumber 2*pi/(c*lambda)
  std::vector<double> b;     // surface coefficients [m]
  double residual_norm = 0.0;  // max Bernoulli residual over 4N nodes / (g*lambda)
  double steepness = 0.0;      // H/lambda

  int modes() const { return static_cast<int>(b.size()); }
  double period_q() const { return c * lambda; }  // conformal period in q
};

}  // namespace stokes
