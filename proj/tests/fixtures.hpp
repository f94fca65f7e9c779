#pragma once

#include <cmath>

#include "nestedvrp/core.hpp"

namespace fixture {

// Depot plus two locations on an equilateral triangle; every leg takes 100 s
// at 30 m/s and both observations take 100 s.
inline nvrp::Instance desk3(double battery = 900.0, double swap = 100.0) {
  nvrp::Instance inst;
  inst.id = "desk3";
  inst.battery = battery;
  inst.swap_time = swap;
  const double s = 30.0;
  inst.locations = {{0, 0.0, 0.0, 0.0}, {1, s, 0.0, 100.0}, {2, s / 2, s * std::sqrt(3.0) / 2, 100.0}};
  return inst;
}

// One location 100 s away from the depot.
inline nvrp::Instance single(double obs = 50.0) {
  nvrp::Instance inst;
  inst.id = "single";
  inst.locations = {{0, 0.0, 0.0, 0.0}, {1, 30.0, 0.0, obs}};
  return inst;
}

}  // namespace fixture
