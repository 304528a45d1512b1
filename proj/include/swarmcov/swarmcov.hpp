#pragma once

#include "swarmcov/asymptotics.hpp"
#include "swarmcov/cf_uniform.hpp"
#include "swarmcov/ct_uniform.hpp"
#include "swarmcov/design.hpp"
#include "swarmcov/mc.hpp"
#include "swarmcov/nonuniform.hpp"
#include "swarmcov/parent.hpp"
#include "swarmcov/precision.hpp"
#include "swarmcov/quadrature.hpp"
#include "swarmcov/rng.hpp"
#include "swarmcov/scenario.hpp"
#include "swarmcov/volume.hpp"

namespace swarmcov {
inline constexpr const char* version = "1.0.0";
}
