#pragma once

#include <cmath>

#include "nestedvrp/core.hpp"
#include "nestedvrp/tsp.hpp"

namespace nvrp {

struct LowerBound {
  double value = 0.0;       // seconds
  double tsp_length = 0.0;  // drone tour term
  double obs_total = 0.0;   // normalized observation term
  bool certified = true;    // false when the tour term came from the heuristic
};

inline constexpr int kBoundExactTspMax = 12;

// TSP time + observation time + one swap per full battery of that work,
// plus the folded observation offset.
inline LowerBound lower_bound(const Problem& pr) {
  LowerBound lb;
  const int n = pr.size();
  if (n <= kBoundExactTspMax) {
    lb.tsp_length = solve_tsp_exact(pr.m.drone).length;
  } else {
    lb.tsp_length = solve_tsp_heuristic(pr.m.drone).length;
    lb.certified = false;
  }
  for (int i = 1; i <= n; ++i) lb.obs_total += pr.instance().locations[static_cast<std::size_t>(i)].obs_time;
  const double work = lb.tsp_length + lb.obs_total;
  lb.value = work + std::floor(work / pr.p.battery) * pr.p.swap_time + pr.norm.obs_offset;
  return lb;
}

inline LowerBound lower_bound(const Instance& inst) { return lower_bound(make_problem(inst)); }

}  // namespace nvrp
