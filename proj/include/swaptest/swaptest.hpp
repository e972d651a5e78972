#pragma once

// Umbrella header.

#include "swaptest/core.hpp"
#include "swaptest/experiments.hpp"
#include "swaptest/linalg.hpp"
#include "swaptest/multiplicity.hpp"
#include "swaptest/normal.hpp"
#include "swaptest/parallel.hpp"
#include "swaptest/power.hpp"
#include "swaptest/rng.hpp"
#include "swaptest/scores.hpp"
#include "swaptest/shift_bounds.hpp"
#include "swaptest/simgen.hpp"
#include "swaptest/test_engine.hpp"
