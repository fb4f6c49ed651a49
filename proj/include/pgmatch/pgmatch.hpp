#pragma once

#include "pgmatch/asp.hpp"
#include "pgmatch/bench.hpp"
#include "pgmatch/derive.hpp"
#include "pgmatch/edit.hpp"
#include "pgmatch/errors.hpp"
#include "pgmatch/ged.hpp"
#include "pgmatch/generators.hpp"
#include "pgmatch/graph.hpp"
#include "pgmatch/rewrite.hpp"
#include "pgmatch/search.hpp"
#include "pgmatch/solver.hpp"
#include "pgmatch/text_io.hpp"
