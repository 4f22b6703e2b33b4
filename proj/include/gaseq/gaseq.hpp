#pragma once

#include "gaseq/baselines.hpp"
#include "gaseq/echo_sim.hpp"
#include "gaseq/errors.hpp"
#include "gaseq/ga_engine.hpp"
#include "gaseq/phase_code.hpp"
#include "gaseq/scr_fitness.hpp"
