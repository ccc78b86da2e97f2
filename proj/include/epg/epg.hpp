// epg.hpp — umbrella header.
#pragma once

#include "epg/builder.hpp"
#include "epg/complex.hpp"
#include "epg/csv.hpp"
#include "epg/dataset.hpp"
#include "epg/energy.hpp"
#include "epg/generators.hpp"
#include "epg/grammar.hpp"
#include "epg/graph.hpp"
#include "epg/graph_json.hpp"
#include "epg/linalg.hpp"
#include "epg/optimizer.hpp"
#include "epg/svg.hpp"
#include "epg/trace_io.hpp"
