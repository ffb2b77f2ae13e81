#pragma once

// Umbrella header for the nematic hydrodynamics library: a 2D periodic
// pseudo-spectral solver for the coupled velocity/director system with the
// full anisotropic viscous stress, plus the diagnostics that check its
// algebraic identities, energy balance, and two-run comparison estimate.

#include "els/checkpoint.hpp"
#include "els/coeffs.hpp"
#include "els/config.hpp"
#include "els/csv.hpp"
#include "els/diagnostics.hpp"
#include "els/dynamics.hpp"
#include "els/errors.hpp"
#include "els/fft.hpp"
#include "els/field.hpp"
#include "els/grid.hpp"
#include "els/initial_data.hpp"
#include "els/leslie.hpp"
#include "els/linalg.hpp"
#include "els/oseen_frank.hpp"
#include "els/runner.hpp"
#include "els/spectral.hpp"
#include "els/svg.hpp"
