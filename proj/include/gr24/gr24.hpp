#pragma once

// Riesz and logarithmic energies on the Grassmannian Gr(2,4): geometry,
// special functions, the harmonic-ensemble kernel and sampler, quadrature,
// expected energies and their asymptotic constants, linear-programming
// lower bounds, and an energy minimizer.

#include "gr24/bounds.hpp"
#include "gr24/energy.hpp"
#include "gr24/errors.hpp"
#include "gr24/frame.hpp"
#include "gr24/harmonic_kernel.hpp"
#include "gr24/optimizer.hpp"
#include "gr24/parallel.hpp"
#include "gr24/pointset_io.hpp"
#include "gr24/quadrature.hpp"
#include "gr24/rng.hpp"
#include "gr24/sampling.hpp"
#include "gr24/special_functions.hpp"
