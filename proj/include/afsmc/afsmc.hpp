#pragma once

// Core library: fuzzy approximation, plants, controllers, simulation.
#include "afsmc/controllers.hpp"
#include "afsmc/csv.hpp"
#include "afsmc/errors.hpp"
#include "afsmc/fuzzy.hpp"
#include "afsmc/integrator.hpp"
#include "afsmc/plants.hpp"
#include "afsmc/sim.hpp"
#include "afsmc/state.hpp"
