#pragma once

#include "oacsim/analytic.hpp"
#include "oacsim/channel.hpp"
#include "oacsim/estimators.hpp"
#include "oacsim/harness.hpp"
#include "oacsim/numerics.hpp"
#include "oacsim/rng.hpp"
#include "oacsim/scenario.hpp"
#include "oacsim/spmap.hpp"
#include "oacsim/types.hpp"
