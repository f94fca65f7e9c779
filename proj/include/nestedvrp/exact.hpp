#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "nestedvrp/cnu.hpp"
#include "nestedvrp/core.hpp"
#include "nestedvrp/tsp.hpp"

namespace nvrp {

// A stretch of the mission between two fixed swap stops whose interior
// locations may be reordered freely.
struct OpenSpan {
  int start = 0;
  bool start_before_obs = false;  // start location still has to be observed
  std::vector<int> free;          // interior locations; their order is the reference order
  int end = 0;
  bool end_after_obs = false;  // end location is observed inside the span
  SpanContext ctx;
};

struct OpenResult {
  std::vector<int> order;  // interior order chosen
  CnuPlan plan;            // spans relative to the open sequence
  double value = 0.0;      // plan cost, less T_s when the successor's swap is waived
  bool fallback = false;   // heuristic ordering was used
};

inline constexpr int kExactMaxDefault = 9;

inline double span_value(const CnuPlan& plan, const SpanContext& ctx, const BatteryParams& p) {
  double v = plan.cost;
  if (ctx.successor_waivable && !plan.units.empty() && plan.units.back().kind == UnitKind::Shipment) v -= p.swap_time;
  return v;
}

inline TaskSequence build_span_sequence(const OpenSpan& span, const std::vector<int>& order, const Problem& pr) {
  return build_open_sequence(span.start, span.start_before_obs, order, span.end, span.end_after_obs, pr.instance(),
                             pr.m);
}

inline bool span_is_empty(const OpenSpan& span) {
  return span.free.empty() && !span.start_before_obs && !span.end_after_obs && span.start == span.end;
}

// Cost of one fixed order; nullopt when no feasible partition exists.
inline std::optional<OpenResult> evaluate_order(const OpenSpan& span, const std::vector<int>& order,
                                                const Problem& pr) {
  OpenResult r;
  r.order = order;
  if (span_is_empty(span)) return r;
  try {
    r.plan = solve_cnu_open(build_span_sequence(span, order, pr), pr.m, pr.p, span.ctx);
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
  r.value = span_value(r.plan, span.ctx, pr.p);
  return r;
}

namespace detail {

// Depth-first enumeration of interior orders in lexicographic order with a
// forward partition DP extended one location at a time. Partial orders are
// pruned with a bound that charges every remaining task at least its drone
// duration, which is valid when the truck is never faster than the drone.
class OrderSearch {
 public:
  OrderSearch(const OpenSpan& span, const Problem& pr, double bound)
      : span_(span), pr_(pr), best_value_(bound), free_(span.free) {
    std::sort(free_.begin(), free_.end());
    const auto& inst = pr.instance();
    prune_ = inst.truck_speed <= inst.drone_speed;
    const double inf = std::numeric_limits<double>::infinity();
    min_in_.assign(free_.size(), inf);
    for (std::size_t a = 0; a < free_.size(); ++a) {
      min_in_[a] = pr.m.drone(span.start, free_[a]);
      for (std::size_t b = 0; b < free_.size(); ++b)
        if (a != b) min_in_[a] = std::min(min_in_[a], pr.m.drone(free_[b], free_[a]));
      min_end_ = std::min(min_end_, pr.m.drone(free_[a], span.end));
      rem_obs_ += inst.locations[static_cast<std::size_t>(free_[a])].obs_time;
      rem_travel_ += min_in_[a];
    }
    tail_ = span.end_after_obs ? inst.locations[static_cast<std::size_t>(span.end)].obs_time : 0.0;
    waive_ = span.ctx.successor_waivable ? pr.p.swap_time : 0.0;
    used_.assign(free_.size(), 0);
  }

  // Best order strictly better than the bound, if any.
  std::optional<std::vector<int>> run() {
    push(TaskKind::Start, 0.0, span_.start);
    if (span_.start_before_obs)
      push(TaskKind::Observe, pr_.instance().locations[static_cast<std::size_t>(span_.start)].obs_time, span_.start);
    dfs();
    if (!found_) return std::nullopt;
    return best_order_;
  }

 private:
  using Pair = std::array<double, 2>;

  void push(TaskKind kind, double duration, int loc) {
    w_.push_back(duration);
    kind_.push_back(kind);
    loc_.push_back(loc);
    const int j = static_cast<int>(w_.size()) - 1;
    const double inf = std::numeric_limits<double>::infinity();
    Pair fj{inf, inf};
    if (j == 0) {
      fj[span_.ctx.after_shipment ? 1 : 0] = 0.0;
      F_.push_back(fj);
      G_.push_back(0.0);
      return;
    }
    const auto& p = pr_.p;
    double drone = 0.0;
    for (int i = j - 1; i >= 0; --i) {
      drone += w_[static_cast<std::size_t>(i + 1)];
      const Pair& fi = F_[static_cast<std::size_t>(i)];
      const double t = pr_.m.truck(loc_[static_cast<std::size_t>(i)], loc_[static_cast<std::size_t>(j)]);
      if (i == j - 1 && kind == TaskKind::Travel) {
        const double c = std::max(t, p.swap_time);
        fj[1] = std::min(fj[1], std::min(fi[0], fi[1]) + c);
        continue;
      }
      if (drone > p.battery + kTimeEps) break;
      if (t > p.battery + kTimeEps) continue;
      const double base = std::max(drone, t);
      fj[0] = std::min({fj[0], fi[0] + base + p.swap_time, fi[1] + base});
    }
    F_.push_back(fj);
    G_.push_back(std::min({G_.back() + duration, fj[0], fj[1]}));
  }

  void pop() {
    w_.pop_back();
    kind_.pop_back();
    loc_.pop_back();
    F_.pop_back();
    G_.pop_back();
  }

  void dfs() {
    const auto& inst = pr_.instance();
    if (order_.size() == free_.size()) {
      const int cur = order_.empty() ? span_.start : order_.back();
      push(TaskKind::Travel, pr_.m.drone(cur, span_.end), span_.end);
      if (span_.end_after_obs) push(TaskKind::Observe, tail_, span_.end);
      const Pair& f = F_.back();
      const double value = std::min(f[0], f[1] - waive_);
      if (value < best_value_ - kTimeEps) {
        best_value_ = value;
        best_order_ = order_;
        found_ = true;
      }
      if (span_.end_after_obs) pop();
      pop();
      return;
    }
    const int cur = order_.empty() ? span_.start : order_.back();
    for (std::size_t a = 0; a < free_.size(); ++a) {
      if (used_[a]) continue;
      const int v = free_[a];
      const double obs = inst.locations[static_cast<std::size_t>(v)].obs_time;
      push(TaskKind::Travel, pr_.m.drone(cur, v), v);
      push(TaskKind::Observe, obs, v);
      used_[a] = 1;
      order_.push_back(v);
      rem_obs_ -= obs;
      rem_travel_ -= min_in_[a];
      bool descend = true;
      if (prune_) {
        const double last_leg = order_.size() == free_.size() ? pr_.m.drone(v, span_.end) : min_end_;
        const double lb = G_.back() + rem_obs_ + rem_travel_ + last_leg + tail_ - waive_;
        descend = lb < best_value_ - kTimeEps;
      }
      if (descend) dfs();
      rem_obs_ += obs;
      rem_travel_ += min_in_[a];
      order_.pop_back();
      used_[a] = 0;
      pop();
      pop();
    }
  }

  const OpenSpan& span_;
  const Problem& pr_;
  double best_value_;
  std::vector<int> free_;
  bool prune_ = true;
  std::vector<double> min_in_;
  double min_end_ = std::numeric_limits<double>::infinity();
  double rem_obs_ = 0.0;
  double rem_travel_ = 0.0;
  double tail_ = 0.0;
  double waive_ = 0.0;
  std::vector<char> used_;
  std::vector<int> order_;
  std::vector<int> best_order_;
  bool found_ = false;

  std::vector<double> w_;
  std::vector<TaskKind> kind_;
  std::vector<int> loc_;
  std::vector<Pair> F_;  // best cost to reach each boundary, by previous-unit-was-shipment
  std::vector<double> G_;
};

}  // namespace detail

// Best ordering of the span's free locations. Above `max_free` locations the
// better of the reference order and a 2-opt path order is returned instead.
inline OpenResult solve_exact_open(const OpenSpan& span, const Problem& pr, int max_free = kExactMaxDefault,
                                   std::uint64_t seed = 0) {
  for (int loc : span.free) detail::check_location(pr.instance(), loc);
  if (span_is_empty(span)) return {};

  auto reference = evaluate_order(span, span.free, pr);
  if (static_cast<int>(span.free.size()) > max_free) {
    auto alt = evaluate_order(span, solve_path_heuristic(pr.m.drone, span.start, span.free, span.end, seed), pr);
    std::optional<OpenResult> best = reference;
    if (alt && (!best || alt->value < best->value - kTimeEps)) best = alt;
    if (!best) {
      // surfaces the blocking task
      solve_cnu_open(build_span_sequence(span, span.free, pr), pr.m, pr.p, span.ctx);
      throw InfeasibleError(0, "no feasible order for the span");
    }
    best->fallback = true;
    return *best;
  }

  const double bound = reference ? reference->value + 1e-6 : std::numeric_limits<double>::infinity();
  detail::OrderSearch search(span, pr, bound);
  const auto order = search.run();
  if (!order) {
    if (reference) return *reference;
    solve_cnu_open(build_span_sequence(span, span.free, pr), pr.m, pr.p, span.ctx);
    throw InfeasibleError(0, "no feasible order for the span");
  }
  auto r = evaluate_order(span, *order, pr);
  if (!r) throw InfeasibleError(0, "order search returned an infeasible order");
  return *r;
}

inline Solution solve_exact(const Problem& pr, int max_n = kExactMaxDefault) {
  const int n = pr.size();
  if (n > max_n)
    throw SizeError("exact solving supports at most " + std::to_string(max_n) + " locations (got " +
                    std::to_string(n) + ")");
  Solution s;
  s.instance_id = pr.instance().id;
  s.obs_offset = pr.norm.obs_offset;
  if (n == 0) {
    s.route = {0, 0};
    s.makespan = makespan(s);
    return s;
  }
  OpenSpan span;
  const auto seed = solve_tsp_heuristic(pr.m.drone).order;
  span.free.assign(seed.begin() + 1, seed.end() - 1);
  const auto r = solve_exact_open(span, pr, max_n);
  s.route.push_back(0);
  s.route.insert(s.route.end(), r.order.begin(), r.order.end());
  s.route.push_back(0);
  s.units = r.plan.units;
  s.makespan = makespan(s);
  return s;
}

inline Solution solve_exact(const Instance& inst, int max_n = kExactMaxDefault) {
  return solve_exact(make_problem(inst), max_n);
}

}  // namespace nvrp
