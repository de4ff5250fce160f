#pragma once

// Umbrella header: exact uniqueness analysis on the discrete cube, the
// level-set geometry around it, extremal set sizes, and Ising fitting.

#include <uniqcube/rational.hpp>
#include <uniqcube/hypercube.hpp>
#include <uniqcube/matrix.hpp>
#include <uniqcube/simplex.hpp>
#include <uniqcube/walsh.hpp>
#include <uniqcube/uniqueness.hpp>
#include <uniqcube/parallel.hpp>
#include <uniqcube/level_geometry.hpp>
#include <uniqcube/extremal.hpp>
#include <uniqcube/ising.hpp>
#include <uniqcube/serialization.hpp>
