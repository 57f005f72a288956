#pragma once

// Umbrella header: translation-invariant valuations on polytopes, mixed
// volumes, convolution, norms, the variational Minkowski solver, and
// dynamical degrees of linear actions.

#include "valgebra/dynamics.hpp"
#include "valgebra/geometry.hpp"
#include "valgebra/io.hpp"
#include "valgebra/linear_map.hpp"
#include "valgebra/minkowski_solver.hpp"
#include "valgebra/mixed_volume.hpp"
#include "valgebra/polytope.hpp"
#include "valgebra/rng.hpp"
#include "valgebra/valuation.hpp"
