#pragma once

#include "jcsim/model.hpp"
#include "jcsim/integrator.hpp"
#include "jcsim/observables.hpp"
#include "jcsim/diagnostics.hpp"
#include "jcsim/oracle.hpp"
#include "jcsim/presets.hpp"
#include "jcsim/config.hpp"
#include "jcsim/io.hpp"
#include "jcsim/plot.hpp"
#include "jcsim/sweep.hpp"
