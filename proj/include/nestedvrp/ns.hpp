#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "nestedvrp/cnu.hpp"
#include "nestedvrp/core.hpp"
#include "nestedvrp/exact.hpp"
#include "nestedvrp/tsp.hpp"

namespace nvrp {

struct NsParams {
  double beta = 0.25;
  int n_unch = 5;
  int n_max = 50;
  double accept_worse_prob = 0.5;
  std::uint64_t seed = 0;
  int exact_span_limit = kExactMaxDefault;  // free locations solved exactly per reconstruction

  // Iteration cap used for small (20) and large (50) instances.
  static NsParams defaults_for(int n) {
    NsParams p;
    p.n_max = n <= 10 ? 20 : 50;
    return p;
  }
};

inline void check_params(const NsParams& p) {
  if (!(p.beta > 0.0 && p.beta <= 1.0)) throw ParameterError("beta must lie in (0, 1]");
  if (p.n_unch < 1) throw ParameterError("n_unch must be at least 1");
  if (p.n_max < 1) throw ParameterError("n_max must be at least 1");
  if (!(p.accept_worse_prob >= 0.0 && p.accept_worse_prob <= 1.0))
    throw ParameterError("accept_worse_prob must lie in [0, 1]");
  if (p.exact_span_limit < 0) throw ParameterError("exact_span_limit must be non-negative");
}

inline constexpr int kInitExactTspMax = 12;

inline Solution initialize(const Problem& pr) {
  const auto& tau = pr.m.drone;
  const Tour tour = pr.size() <= kInitExactTspMax ? solve_tsp_exact(tau) : solve_tsp_heuristic(tau);
  auto s = solve_cnu(build_task_sequence(tour.order, pr.instance(), pr.m), pr.m, pr.p, pr.norm.obs_offset);
  s.instance_id = pr.instance().id;
  return s;
}

inline Solution initialize(const Instance& inst) { return initialize(make_problem(inst)); }

// Two adjacent units chosen for removal and the span they leave open.
struct Destruction {
  int chosen = 0;  // unit drawn from the slack pool
  int first = 0;   // earlier of the two removed units
  int begin = 0;   // removed task interval (begin, end]
  int end = 0;
  std::vector<int> free_locations;  // every location covered by the two units
  OpenSpan span;                    // reconstruction subproblem
};

// Indices of the units eligible for destruction, highest slack first.
inline std::vector<int> slack_pool(const Solution& s, const NsParams& params, double battery) {
  std::vector<int> idx(s.units.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return s.units[static_cast<std::size_t>(a)].slack(battery) > s.units[static_cast<std::size_t>(b)].slack(battery);
  });
  const auto size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(params.beta * static_cast<double>(s.units.size()) + 1e-12)));
  idx.resize(std::min(size, idx.size()));
  return idx;
}

inline Destruction describe_destruction(const Solution& s, int chosen, int first) {
  const auto& u0 = s.units[static_cast<std::size_t>(first)];
  const auto& u1 = s.units[static_cast<std::size_t>(first + 1)];
  Destruction d;
  d.chosen = chosen;
  d.first = first;
  d.begin = u0.begin;
  d.end = u1.end;
  d.free_locations = u0.locations;
  d.free_locations.insert(d.free_locations.end(), u1.locations.begin(), u1.locations.end());

  auto& sp = d.span;
  sp.start = boundary_location(s.route, d.begin);
  sp.start_before_obs = d.begin % 2 == 1;
  sp.end = boundary_location(s.route, d.end);
  sp.end_after_obs = d.end % 2 == 0;
  const int p0 = (d.begin + 1) / 2 + 1;
  const int p1 = (d.end - 1) / 2;
  for (int k = p0; k <= p1; ++k) sp.free.push_back(s.route[static_cast<std::size_t>(k)]);
  sp.ctx.after_shipment = first > 0 && s.units[static_cast<std::size_t>(first - 1)].kind == UnitKind::Shipment;
  const auto next = static_cast<std::size_t>(first + 2);
  sp.ctx.successor_waivable = next < s.units.size() && s.units[next].kind != UnitKind::Shipment;
  return d;
}

// Draws a unit from the slack pool and pairs it with a random neighbor.
// Returns nullopt when the solution has fewer than two units.
inline std::optional<Destruction> destroy(const Solution& s, const NsParams& params, double battery,
                                          std::mt19937_64& rng) {
  const int count = static_cast<int>(s.units.size());
  if (count < 2) return std::nullopt;
  const auto pool = slack_pool(s, params, battery);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const int chosen = pool[pick(rng)];
  int first;
  if (chosen == 0) {
    first = 0;
  } else if (chosen == count - 1) {
    first = chosen - 1;
  } else {
    std::uniform_int_distribution<int> side(0, 1);
    first = side(rng) == 0 ? chosen - 1 : chosen;
  }
  return describe_destruction(s, chosen, first);
}

struct Reconstruction {
  Solution candidate;
  bool fallback = false;
};

// Re-solves the open span and splices the result into a copy of `s`.
inline Reconstruction reconstruct(const Solution& s, const Destruction& d, const Problem& pr,
                                  int exact_span_limit = kExactMaxDefault, std::uint64_t seed = 0) {
  const auto r = solve_exact_open(d.span, pr, exact_span_limit, seed);
  Reconstruction out;
  out.fallback = r.fallback;
  Solution& c = out.candidate;
  c = s;
  const int p0 = (d.begin + 1) / 2 + 1;
  std::copy(r.order.begin(), r.order.end(), c.route.begin() + p0);

  std::vector<NestedUnit> units(s.units.begin(), s.units.begin() + d.first);
  for (auto u : r.plan.units) {
    u.begin += d.begin;
    u.end += d.begin;
    units.push_back(std::move(u));
  }
  units.insert(units.end(), s.units.begin() + d.first + 2, s.units.end());
  c.units = std::move(units);
  recost(c, build_task_sequence(c.route, pr.instance(), pr.m), pr.m, pr.p);
  return out;
}

inline bool accept(double candidate, double incumbent, double draw, double prob = 0.5) {
  if (candidate < incumbent - kTimeEps) return true;
  return draw < prob;
}

inline bool accept(double candidate, double incumbent, std::mt19937_64& rng, double prob = 0.5) {
  if (candidate < incumbent - kTimeEps) return true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < prob;
}

struct NsIteration {
  int iter = 0;
  double incumbent = 0.0;
  double best = 0.0;
  bool accepted = false;
  int destroyed_unit = -1;
};

struct NsResult {
  Solution best;
  double initial_makespan = 0.0;
  int iterations = 0;
  int fallbacks = 0;  // reconstructions that used the heuristic ordering
  std::vector<NsIteration> trace;
};

inline NsResult solve_ns(const Problem& pr, const NsParams& params) {
  check_params(params);
  std::mt19937_64 rng(params.seed);
  NsResult res;
  Solution incumbent = initialize(pr);
  res.initial_makespan = incumbent.makespan;
  res.best = incumbent;

  int unchanged = 0;
  for (int it = 1; it <= params.n_max; ++it) {
    const auto d = destroy(incumbent, params, pr.p.battery, rng);
    if (!d) break;
    auto rc = reconstruct(incumbent, *d, pr, params.exact_span_limit, params.seed + static_cast<std::uint64_t>(it));
    if (rc.fallback) ++res.fallbacks;
    const bool ok = accept(rc.candidate.makespan, incumbent.makespan, rng, params.accept_worse_prob);
    if (ok) incumbent = std::move(rc.candidate);
    if (incumbent.makespan < res.best.makespan - kTimeEps) {
      res.best = incumbent;
      unchanged = 0;
    } else {
      ++unchanged;
    }
    res.iterations = it;
    res.trace.push_back({it, incumbent.makespan, res.best.makespan, ok, d->chosen});
    if (unchanged >= params.n_unch) break;
  }
  return res;
}

inline NsResult solve_ns(const Instance& inst, const NsParams& params) {
  return solve_ns(make_problem(inst), params);
}

}  // namespace nvrp
