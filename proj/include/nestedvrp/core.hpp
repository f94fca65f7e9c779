#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nvrp {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Bad numeric parameter (speed, battery, search knob).
class ParameterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parameter"; }
};

// Malformed route, unit list or file contents.
class StructuralError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "structural"; }
};

// Problem too large for an exact routine.
class SizeError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "size"; }
};

// No feasible partition exists; `task` is the first task that cannot be covered.
class InfeasibleError : public Error {
 public:
  InfeasibleError(int task, const std::string& what) : Error(what), task_(task) {}
  const char* kind() const noexcept override { return "infeasible"; }
  int task() const noexcept { return task_; }

 private:
  int task_;
};

// Absolute tolerance used for feasibility and strict-improvement tests (seconds).
inline constexpr double kTimeEps = 1e-9;

// ---------------------------------------------------------------------------
// Problem data
// ---------------------------------------------------------------------------

struct Location {
  int id = 0;
  double x = 0.0;  // coordinate units
  double y = 0.0;
  double obs_time = 0.0;  // seconds
};

// Index 0 of `locations` is the depot. Location ids equal their index.
struct Instance {
  std::string id;
  std::vector<Location> locations;
  double drone_speed = 30.0;  // m/s
  double truck_speed = 30.0;  // m/s
  double battery = 900.0;     // T_bl, seconds
  double swap_time = 100.0;   // T_s, seconds
  double unit_scale = 100.0;  // meters per coordinate unit

  // Number of non-depot locations.
  int size() const { return static_cast<int>(locations.size()) - 1; }
  double alpha() const { return drone_speed / truck_speed; }
};

struct BatteryParams {
  double battery = 900.0;
  double swap_time = 100.0;
};

inline BatteryParams battery_params(const Instance& inst) {
  return {inst.battery, inst.swap_time};
}

// Dense symmetric matrix of travel times.
class TimeMatrix {
 public:
  TimeMatrix() = default;
  explicit TimeMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& at(int i, int j) { return data_[index(i, j)]; }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct TravelMatrices {
  TimeMatrix drone;  // tau^D
  TimeMatrix truck;  // tau^T
};

inline void check_instance_parameters(const Instance& inst) {
  if (inst.locations.empty()) throw ParameterError("instance has no locations (depot missing)");
  if (!(inst.drone_speed > 0.0)) throw ParameterError("drone speed must be positive");
  if (!(inst.truck_speed > 0.0)) throw ParameterError("truck speed must be positive");
  if (!(inst.battery > 0.0)) throw ParameterError("battery capacity must be positive");
  if (!(inst.swap_time >= 0.0)) throw ParameterError("swap time must be non-negative");
  if (!(inst.unit_scale > 0.0)) throw ParameterError("unit scale must be positive");
  for (std::size_t i = 0; i < inst.locations.size(); ++i) {
    if (inst.locations[i].id != static_cast<int>(i))
      throw StructuralError("location ids must equal their index (expected " + std::to_string(i) +
                            ", got " + std::to_string(inst.locations[i].id) + ")");
    if (!(inst.locations[i].obs_time >= 0.0))
      throw ParameterError("observation time of location " + std::to_string(i) + " is negative");
  }
}

// Euclidean travel times in seconds for both vehicles.
inline TravelMatrices build_travel_matrices(const Instance& inst) {
  check_instance_parameters(inst);
  const int n = static_cast<int>(inst.locations.size());
  TravelMatrices m{TimeMatrix(n), TimeMatrix(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = inst.locations[i].x - inst.locations[j].x;
      const double dy = inst.locations[i].y - inst.locations[j].y;
      const double meters = std::hypot(dx, dy) * inst.unit_scale;
      const double d = meters / inst.drone_speed;
      const double t = meters / inst.truck_speed;
      m.drone.at(i, j) = m.drone.at(j, i) = d;
      m.truck.at(i, j) = m.truck.at(j, i) = t;
    }
  }
  return m;
}

struct NormalizedInstance {
  Instance instance;
  double obs_offset = 0.0;          // seconds added to every makespan
  std::vector<int> forced_holding;  // locations whose observation was folded
};

// Folds observation times of at least one battery into a route-independent
// constant: each full battery of observation costs T_bl + T_s.
inline NormalizedInstance normalize_observations(const Instance& inst) {
  NormalizedInstance out{inst, 0.0, {}};
  for (auto& loc : out.instance.locations) {
    if (!(loc.obs_time >= 0.0))
      throw ParameterError("observation time of location " + std::to_string(loc.id) + " is negative");
    if (loc.obs_time >= inst.battery) {
      const double folds = std::floor(loc.obs_time / inst.battery);
      loc.obs_time -= folds * inst.battery;
      out.obs_offset += folds * (inst.battery + inst.swap_time);
      out.forced_holding.push_back(loc.id);
    }
  }
  return out;
}

// Normalized instance with its travel matrices; what every solver works on.
struct Problem {
  NormalizedInstance norm;
  TravelMatrices m;
  BatteryParams p;

  const Instance& instance() const { return norm.instance; }
  int size() const { return norm.instance.size(); }
};

inline Problem make_problem(const Instance& inst) {
  check_instance_parameters(inst);
  Problem pr{normalize_observations(inst), {}, battery_params(inst)};
  pr.m = build_travel_matrices(pr.norm.instance);
  return pr;
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

enum class UnitKind { Nested, Shipment, Holding };

inline const char* to_string(UnitKind k) {
  switch (k) {
    case UnitKind::Nested: return "nested";
    case UnitKind::Shipment: return "shipment";
    case UnitKind::Holding: return "holding";
  }
  return "?";
}

inline UnitKind unit_kind_from_string(const std::string& s) {
  if (s == "nested") return UnitKind::Nested;
  if (s == "shipment") return UnitKind::Shipment;
  if (s == "holding") return UnitKind::Holding;
  throw StructuralError("unknown unit kind '" + s + "'");
}

// A unit covers the half-open task interval (begin, end] of the mission's task
// sequence. `cost` is the IBR plus the start swap when charged.
struct NestedUnit {
  UnitKind kind = UnitKind::Nested;
  int begin = 0;
  int end = 0;
  std::vector<int> locations;  // locations whose observation lies in the span
  double drone_time = 0.0;     // D
  double truck_time = 0.0;     // T
  bool charged = true;         // start swap T_s paid
  double ibr = 0.0;            // interval between rendezvous
  double cost = 0.0;

  double slack(double battery) const { return battery - ibr; }
  double idle() const { return std::max(0.0, truck_time - drone_time); }
};

struct Solution {
  std::string instance_id;
  std::vector<int> route;  // depot ... depot
  std::vector<NestedUnit> units;
  double makespan = 0.0;
  double obs_offset = 0.0;
};

inline double makespan(const Solution& s) {
  double total = s.obs_offset;
  for (const auto& u : s.units) total += u.cost;
  return total;
}

// Location reached when task `b` of a full mission over `route` completes.
// Even b = 2k: after observing route[k]; odd b = 2k+1: on arrival at route[k+1].
inline int boundary_location(const std::vector<int>& route, int b) {
  return b % 2 == 0 ? route[static_cast<std::size_t>(b / 2)]
                    : route[static_cast<std::size_t>(b / 2 + 1)];
}

struct SwapStop {
  int location = 0;
  bool before_observation = false;
};

// Every unit boundary, first split to final rendezvous.
inline std::vector<SwapStop> swap_stops(const Solution& s) {
  std::vector<SwapStop> stops;
  if (s.units.empty()) return stops;
  stops.push_back({boundary_location(s.route, s.units.front().begin), s.units.front().begin % 2 == 1});
  for (const auto& u : s.units) stops.push_back({boundary_location(s.route, u.end), u.end % 2 == 1});
  return stops;
}

// Truck path as a location sequence; repeated stops (holding) collapse.
inline std::vector<int> truck_path(const Solution& s) {
  std::vector<int> path;
  for (const auto& stop : swap_stops(s))
    if (path.empty() || path.back() != stop.location) path.push_back(stop.location);
  if (path.empty() && !s.route.empty()) path.push_back(s.route.front());
  return path;
}

inline std::vector<std::pair<int, int>> truck_arcs(const Solution& s) {
  std::vector<std::pair<int, int>> arcs;
  const auto path = truck_path(s);
  for (std::size_t i = 1; i < path.size(); ++i) arcs.emplace_back(path[i - 1], path[i]);
  return arcs;
}

// Battery swaps actually performed: charged starts plus in-transit swaps.
inline int swap_count(const Solution& s) {
  int count = 0;
  for (const auto& u : s.units)
    if (u.kind == UnitKind::Shipment || u.charged) ++count;
  return count;
}

}  // namespace nvrp
