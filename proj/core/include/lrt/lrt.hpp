#pragma once

#include "lrt/attention.hpp"
#include "lrt/bounds.hpp"
#include "lrt/config.hpp"
#include "lrt/coreset.hpp"
#include "lrt/ctt.hpp"
#include "lrt/gs_walk.hpp"
#include "lrt/io.hpp"
#include "lrt/kernels.hpp"
#include "lrt/metrics.hpp"
#include "lrt/parallel.hpp"
#include "lrt/point_set.hpp"
#include "lrt/reorder.hpp"
#include "lrt/rng.hpp"
#include "lrt/thinning.hpp"
#include "lrt/types.hpp"
