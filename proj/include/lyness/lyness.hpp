#pragma once

// Umbrella header for the numeric library (the CLI lives in cli.hpp).

#include "lyness/dual.hpp"
#include "lyness/dynamics.hpp"
#include "lyness/errors.hpp"
#include "lyness/export.hpp"
#include "lyness/flow.hpp"
#include "lyness/gradient.hpp"
#include "lyness/invariants.hpp"
#include "lyness/map.hpp"
#include "lyness/matrix.hpp"
#include "lyness/random.hpp"
#include "lyness/rational.hpp"
#include "lyness/reduction.hpp"
#include "lyness/scalar.hpp"
#include "lyness/symmetry.hpp"
#include "lyness/types.hpp"
#include "lyness/verify.hpp"
