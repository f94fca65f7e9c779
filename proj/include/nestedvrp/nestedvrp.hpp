#pragma once

#include "nestedvrp/bench.hpp"
#include "nestedvrp/bound.hpp"
#include "nestedvrp/cnu.hpp"
#include "nestedvrp/core.hpp"
#include "nestedvrp/exact.hpp"
#include "nestedvrp/generator.hpp"
#include "nestedvrp/io.hpp"
#include "nestedvrp/model.hpp"
#include "nestedvrp/ns.hpp"
#include "nestedvrp/plot.hpp"
#include "nestedvrp/tsp.hpp"
#include "nestedvrp/validate.hpp"
