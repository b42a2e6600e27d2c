#pragma once

// Umbrella header for the library. The HTTP service lives separately in
// tempograph/server.hpp.

#include "tempograph/error.hpp"
#include "tempograph/time.hpp"
#include "tempograph/graph.hpp"
#include "tempograph/ops.hpp"
#include "tempograph/aggregation.hpp"
#include "tempograph/exploration.hpp"
#include "tempograph/overview.hpp"
#include "tempograph/ingestion.hpp"
#include "tempograph/api.hpp"
