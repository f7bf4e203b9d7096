#pragma once

// Everything except the scenario/report layer, which needs the vendored
// JSON header (include lslab/scenario.hpp for that).

#include "lslab/category.hpp"
#include "lslab/core.hpp"
#include "lslab/dynamical_pair.hpp"
#include "lslab/dynamics.hpp"
#include "lslab/fence.hpp"
#include "lslab/fixtures.hpp"
#include "lslab/group_action.hpp"
#include "lslab/index_engine.hpp"
#include "lslab/numeric.hpp"
#include "lslab/simplicial.hpp"
#include "lslab/space.hpp"
