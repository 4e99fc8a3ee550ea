#pragma once

#include "qwalk/core.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/graph_ops.hpp"
#include "qwalk/operators.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/random.hpp"
#include "qwalk/models/two_partition.hpp"
#include "qwalk/models/bipartite.hpp"
#include "qwalk/models/coined.hpp"
#include "qwalk/models/staggered.hpp"
#include "qwalk/models/lattice.hpp"
#include "qwalk/equivalence.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/simulate.hpp"
