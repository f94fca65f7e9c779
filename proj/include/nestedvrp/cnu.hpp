#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nestedvrp/core.hpp"

namespace nvrp {

enum class TaskKind { Start, Travel, Observe };

// Alternating travel/observation durations the drone executes along a fixed
// order. Task 0 is a zero-length placeholder; boundary b is the moment task b
// completes, so boundary 0 is the start of the sequence.
struct TaskSequence {
  std::vector<int> route;  // drone order including both endpoints
  std::vector<double> w;
  std::vector<TaskKind> kind;
  std::vector<int> loc_at;  // location where task b ends (loc_at[0]: start location)

  int task_count() const { return static_cast<int>(w.size()) - 1; }
};

namespace detail {

inline void push_task(TaskSequence& seq, TaskKind kind, double duration, int loc) {
  seq.w.push_back(duration);
  seq.kind.push_back(kind);
  seq.loc_at.push_back(loc);
}

inline void check_location(const Instance& inst, int loc) {
  if (loc < 0 || loc > inst.size())
    throw StructuralError("location id " + std::to_string(loc) + " not in instance");
}

}  // namespace detail

// Task sequence over an arbitrary open path. When `start_before_obs` the drone
// sits at `start` and still has to observe it; when `end_after_obs` the path
// ends after observing `end`.
inline TaskSequence build_open_sequence(int start, bool start_before_obs, const std::vector<int>& interior,
                                        int end, bool end_after_obs, const Instance& inst,
                                        const TravelMatrices& m) {
  TaskSequence seq;
  seq.route.reserve(interior.size() + 2);
  seq.route.push_back(start);
  seq.route.insert(seq.route.end(), interior.begin(), interior.end());
  seq.route.push_back(end);
  for (int loc : seq.route) detail::check_location(inst, loc);

  detail::push_task(seq, TaskKind::Start, 0.0, start);
  if (start_before_obs) detail::push_task(seq, TaskKind::Observe, inst.locations[start].obs_time, start);
  int prev = start;
  for (int loc : interior) {
    detail::push_task(seq, TaskKind::Travel, m.drone(prev, loc), loc);
    detail::push_task(seq, TaskKind::Observe, inst.locations[loc].obs_time, loc);
    prev = loc;
  }
  detail::push_task(seq, TaskKind::Travel, m.drone(prev, end), end);
  if (end_after_obs) detail::push_task(seq, TaskKind::Observe, inst.locations[end].obs_time, end);
  return seq;
}

// Throws StructuralError unless `route` is depot, a permutation of 1..n, depot.
inline void check_route(const std::vector<int>& route, const Instance& inst) {
  const int n = inst.size();
  if (route.size() != static_cast<std::size_t>(n) + 2)
    throw StructuralError("route must list the depot, all " + std::to_string(n) +
                          " locations once, then the depot");
  if (route.front() != 0 || route.back() != 0) throw StructuralError("route must start and end at the depot");
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t k = 1; k + 1 < route.size(); ++k) {
    const int loc = route[k];
    if (loc < 0 || loc > n) throw StructuralError("location id " + std::to_string(loc) + " not in instance");
    if (loc == 0) throw StructuralError("depot appears inside the route");
    if (seen[static_cast<std::size_t>(loc)]++) throw StructuralError("location " + std::to_string(loc) + " visited twice");
  }
}

// Full mission sequence: w = [0, tau(s0,s1), o_s1, ..., o_sn, tau(sn,s0)].
inline TaskSequence build_task_sequence(const std::vector<int>& route, const Instance& inst,
                                        const TravelMatrices& m) {
  check_route(route, inst);
  const std::vector<int> interior(route.begin() + 1, route.end() - 1);
  return build_open_sequence(0, false, interior, 0, false, inst, m);
}

struct UnitCost {
  UnitKind kind = UnitKind::Nested;
  double drone_time = 0.0;
  double truck_time = 0.0;
  double ibr = 0.0;
  double cost = 0.0;
  bool charged = false;
};

// Cost of the unit covering tasks (i, j]. A single travel task is always a
// shipment; otherwise both vehicles must stay within one battery and the start
// swap is waived right after a shipment.
inline std::optional<UnitCost> unit_cost(const TaskSequence& seq, const TravelMatrices& m, int i, int j,
                                         bool after_shipment, const BatteryParams& p) {
  if (i < 0 || j <= i || j > seq.task_count()) throw StructuralError("unit span out of range");
  UnitCost c;
  c.truck_time = m.truck(seq.loc_at[static_cast<std::size_t>(i)], seq.loc_at[static_cast<std::size_t>(j)]);
  for (int k = i + 1; k <= j; ++k) c.drone_time += seq.w[static_cast<std::size_t>(k)];
  if (j == i + 1 && seq.kind[static_cast<std::size_t>(j)] == TaskKind::Travel) {
    c.kind = UnitKind::Shipment;
    c.ibr = std::max(c.truck_time, p.swap_time);
    c.cost = c.ibr;
    c.charged = false;
    return c;
  }
  if (c.drone_time > p.battery + kTimeEps || c.truck_time > p.battery + kTimeEps) return std::nullopt;
  c.kind = (j == i + 1) ? UnitKind::Holding : UnitKind::Nested;
  c.ibr = std::max(c.drone_time, c.truck_time);
  c.charged = !after_shipment;
  c.cost = c.ibr + (c.charged ? p.swap_time : 0.0);
  return c;
}

inline NestedUnit make_unit(const TaskSequence& seq, int i, int j, const UnitCost& c) {
  NestedUnit u;
  u.kind = c.kind;
  u.begin = i;
  u.end = j;
  for (int k = i + 1; k <= j; ++k)
    if (seq.kind[static_cast<std::size_t>(k)] == TaskKind::Observe) u.locations.push_back(seq.loc_at[static_cast<std::size_t>(k)]);
  u.drone_time = c.drone_time;
  u.truck_time = c.truck_time;
  u.charged = c.charged;
  u.ibr = c.ibr;
  u.cost = c.cost;
  return u;
}

struct CnuPlan {
  std::vector<NestedUnit> units;  // spans relative to the sequence
  double cost = 0.0;              // sum of unit costs
};

struct SpanContext {
  bool after_shipment = false;      // the unit before the span is a shipment
  bool successor_waivable = false;  // a non-shipment unit follows the span
};

namespace detail {

struct DpCell {
  double value = std::numeric_limits<double>::infinity();
  int units = 0;
  int next = -1;
};

inline bool no_observations(const TaskSequence& seq) {
  for (auto k : seq.kind)
    if (k == TaskKind::Observe) return false;
  return true;
}

// First task that cannot be covered by any chain of feasible units.
inline int blocking_task(const TaskSequence& seq, const TravelMatrices& m, const BatteryParams& p,
                         bool after_shipment) {
  const int L = seq.task_count();
  // reach[b][f]: boundary b reachable with previous-unit-was-shipment flag f
  std::vector<std::array<char, 2>> reach(static_cast<std::size_t>(L) + 1, {0, 0});
  reach[0][after_shipment ? 1 : 0] = 1;
  int furthest = 0;
  for (int i = 0; i < L; ++i) {
    for (int f = 0; f < 2; ++f) {
      if (!reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)]) continue;
      double drone = 0.0;
      for (int j = i + 1; j <= L; ++j) {
        drone += seq.w[static_cast<std::size_t>(j)];
        const bool ship = j == i + 1 && seq.kind[static_cast<std::size_t>(j)] == TaskKind::Travel;
        if (!ship && drone > p.battery + kTimeEps) break;
        const double t = m.truck(seq.loc_at[static_cast<std::size_t>(i)], seq.loc_at[static_cast<std::size_t>(j)]);
        if (!ship && t > p.battery + kTimeEps) continue;
        reach[static_cast<std::size_t>(j)][ship ? 1 : 0] = 1;
        furthest = std::max(furthest, j);
      }
    }
  }
  return furthest + 1;
}

}  // namespace detail

// Minimum-cost partition of the sequence into feasible units. Backward DP over
// (boundary, previous-unit-was-shipment); ties prefer fewer units, then the
// smallest next boundary, which yields the lexicographically smallest plan.
inline CnuPlan solve_cnu_open(const TaskSequence& seq, const TravelMatrices& m, const BatteryParams& p,
                              const SpanContext& ctx = {}) {
  CnuPlan plan;
  const int L = seq.task_count();
  if (L < 1) throw StructuralError("task sequence is empty");
  if (detail::no_observations(seq) && seq.loc_at.front() == seq.loc_at.back()) return plan;

  using detail::DpCell;
  std::vector<DpCell> g(2 * (static_cast<std::size_t>(L) + 1));
  auto cell = [&](int b, int f) -> DpCell& { return g[2 * static_cast<std::size_t>(b) + static_cast<std::size_t>(f)]; };
  cell(L, 0).value = 0.0;
  cell(L, 1).value = ctx.successor_waivable ? -p.swap_time : 0.0;

  const auto truck = [&](int a, int b) {
    return m.truck(seq.loc_at[static_cast<std::size_t>(a)], seq.loc_at[static_cast<std::size_t>(b)]);
  };

  for (int i = L - 1; i >= 0; --i) {
    for (int f = 0; f < 2; ++f) {
      DpCell best;
      double drone = 0.0;
      for (int j = i + 1; j <= L; ++j) {
        drone += seq.w[static_cast<std::size_t>(j)];
        double cost;
        int next_flag;
        if (j == i + 1 && seq.kind[static_cast<std::size_t>(j)] == TaskKind::Travel) {
          cost = std::max(truck(i, j), p.swap_time);
          next_flag = 1;
        } else {
          if (drone > p.battery + kTimeEps) break;
          const double t = truck(i, j);
          if (t > p.battery + kTimeEps) continue;
          cost = std::max(drone, t) + (f ? 0.0 : p.swap_time);
          next_flag = 0;
        }
        const DpCell& nxt = cell(j, next_flag);
        if (!(nxt.value < std::numeric_limits<double>::infinity())) continue;
        const double value = cost + nxt.value;
        const int units = nxt.units + 1;
        if (value < best.value - kTimeEps || (value <= best.value + kTimeEps && units < best.units)) {
          best.value = value;
          best.units = units;
          best.next = j;
        }
      }
      cell(i, f) = best;
    }
  }

  int b = 0;
  int f = ctx.after_shipment ? 1 : 0;
  if (!(cell(0, f).value < std::numeric_limits<double>::infinity())) {
    const int task = detail::blocking_task(seq, m, p, ctx.after_shipment);
    throw InfeasibleError(task, "no feasible unit covers task " + std::to_string(task) + " (duration " +
                                    std::to_string(seq.w[static_cast<std::size_t>(std::min(task, L))]) +
                                    " s exceeds the battery)");
  }
  while (b < L) {
    const int j = cell(b, f).next;
    const auto c = unit_cost(seq, m, b, j, f == 1, p);
    plan.units.push_back(make_unit(seq, b, j, *c));
    plan.cost += c->cost;
    f = c->kind == UnitKind::Shipment ? 1 : 0;
    b = j;
  }
  return plan;
}

// Optimal units for a full mission along the sequence's fixed drone order.
inline Solution solve_cnu(const TaskSequence& seq, const TravelMatrices& m, const BatteryParams& p,
                          double obs_offset = 0.0) {
  Solution s;
  s.route = seq.route;
  s.obs_offset = obs_offset;
  s.units = solve_cnu_open(seq, m, p).units;
  s.makespan = makespan(s);
  return s;
}

// Re-derives D, T, charge flag and cost of every unit from the route.
inline void recost(Solution& s, const TaskSequence& seq, const TravelMatrices& m, const BatteryParams& p) {
  bool after_ship = false;
  for (auto& u : s.units) {
    auto c = unit_cost(seq, m, u.begin, u.end, after_ship, p);
    if (!c) throw StructuralError("unit (" + std::to_string(u.begin) + "," + std::to_string(u.end) + "] is infeasible");
    u = make_unit(seq, u.begin, u.end, *c);
    after_ship = u.kind == UnitKind::Shipment;
  }
  s.makespan = makespan(s);
}

}  // namespace nvrp
