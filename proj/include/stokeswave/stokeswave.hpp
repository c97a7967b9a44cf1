#pragma once

// Steady deep-water gravity waves in conformal variables: spectral solver,
// velocity field and pressure, depth-indexed energy functionals, particle
// trajectories, and a numerical certification suite for the exact identities
// and convexity/monotonicity properties those quantities satisfy.

#include "stokeswave/types.hpp"
#include "stokeswave/field.hpp"
#include "stokeswave/solver.hpp"
#include "stokeswave/functionals.hpp"
#include "stokeswave/trajectories.hpp"
#include "stokeswave/properties.hpp"
#include "stokeswave/io.hpp"
