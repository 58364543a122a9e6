#pragma once

#include "gplan/commands.hpp"
#include "gplan/corpus.hpp"
#include "gplan/grid_map.hpp"
#include "gplan/guidance_map.hpp"
#include "gplan/image.hpp"
#include "gplan/map_io.hpp"
#include "gplan/metrics.hpp"
#include "gplan/nearest.hpp"
#include "gplan/oracle.hpp"
#include "gplan/planner.hpp"
#include "gplan/rng.hpp"
#include "gplan/sampler.hpp"
#include "gplan/scenario.hpp"
