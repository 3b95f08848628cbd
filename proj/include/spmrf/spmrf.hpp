#pragma once

#include "spmrf/calibrate.hpp"
#include "spmrf/changepoint.hpp"
#include "spmrf/common.hpp"
#include "spmrf/densities.hpp"
#include "spmrf/diagnostics.hpp"
#include "spmrf/grid.hpp"
#include "spmrf/io.hpp"
#include "spmrf/model.hpp"
#include "spmrf/obs.hpp"
#include "spmrf/rng.hpp"
#include "spmrf/sampler.hpp"
#include "spmrf/simulate.hpp"
