#pragma once

#include "grasplab/cachesim.hpp"
#include "grasplab/graph.hpp"
#include "grasplab/harness.hpp"
#include "grasplab/reorder.hpp"
#include "grasplab/trace.hpp"
