#pragma once

#include "skyplan/types.hpp"
#include "skyplan/scenario.hpp"
#include "skyplan/model.hpp"
#include "skyplan/solver.hpp"
#include "skyplan/feasibility.hpp"
#include "skyplan/surrogate.hpp"
#include "skyplan/sca.hpp"
#include "skyplan/cli.hpp"
