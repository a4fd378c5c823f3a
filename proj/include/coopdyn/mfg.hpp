#pragma once

#include "coopdyn/mfg/params.hpp"
#include "coopdyn/mfg/model.hpp"
#include "coopdyn/mfg/tables.hpp"
#include "coopdyn/mfg/dynamics.hpp"
#include "coopdyn/mfg/solver.hpp"
#include "coopdyn/mfg/simulate.hpp"
