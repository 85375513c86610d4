#pragma once

#include "soak/allocation.hpp"
#include "soak/channel.hpp"
#include "soak/config.hpp"
#include "soak/errors.hpp"
#include "soak/montecarlo.hpp"
#include "soak/report.hpp"
#include "soak/rng.hpp"
#include "soak/secrecy.hpp"
#include "soak/stats.hpp"
