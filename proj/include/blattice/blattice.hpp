#pragma once

#include "blattice/core.hpp"
#include "blattice/orlicz_function.hpp"
#include "blattice/rearrangement.hpp"
#include "blattice/lattice_spec.hpp"
#include "blattice/special_functions.hpp"
#include "blattice/norms.hpp"
#include "blattice/optimizer.hpp"
#include "blattice/optimal_spaces.hpp"
#include "blattice/decomposability.hpp"
#include "blattice/interpolation.hpp"
