#pragma once

// Rolling disk dynamics: everything except the command-line front end.

#include "rolling_disk/types.hpp"
#include "rolling_disk/kinematics.hpp"
#include "rolling_disk/energetics.hpp"
#include "rolling_disk/constraints.hpp"
#include "rolling_disk/assembly.hpp"
#include "rolling_disk/dynamics.hpp"
#include "rolling_disk/simulator.hpp"
#include "rolling_disk/path_metrics.hpp"
#include "rolling_disk/validation.hpp"
