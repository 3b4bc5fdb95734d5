#pragma once

// Convenience include of the whole library.

#include "proxops/bvp.hpp"
#include "proxops/config.hpp"
#include "proxops/constants.hpp"
#include "proxops/constraints.hpp"
#include "proxops/dispersion.hpp"
#include "proxops/dynamics.hpp"
#include "proxops/ephemeris.hpp"
#include "proxops/epoch.hpp"
#include "proxops/errors.hpp"
#include "proxops/filter.hpp"
#include "proxops/frames.hpp"
#include "proxops/guidance.hpp"
#include "proxops/integrator.hpp"
#include "proxops/io.hpp"
#include "proxops/kepler.hpp"
#include "proxops/keypoint.hpp"
#include "proxops/knowledge.hpp"
#include "proxops/lambert.hpp"
#include "proxops/measurements.hpp"
#include "proxops/plan.hpp"
#include "proxops/propagation.hpp"
#include "proxops/rng.hpp"
#include "proxops/scenario.hpp"
#include "proxops/schedule.hpp"
#include "proxops/state.hpp"
#include "proxops/system_model.hpp"
#include "proxops/uncertainty.hpp"
