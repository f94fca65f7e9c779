#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nestedvrp/cnu.hpp"
#include "nestedvrp/core.hpp"

namespace nvrp {

struct Violation {
  std::string check;  // coverage, contiguity, battery, sync, kind, mismatch, makespan, offset
  int unit = -1;      // unit index, -1 when not unit specific
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double recomputed_makespan = 0.0;

  bool ok() const { return violations.empty(); }
  std::string summary() const {
    std::ostringstream os;
    for (const auto& v : violations) {
      os << v.check;
      if (v.unit >= 0) os << " [unit " << v.unit << "]";
      os << ": " << v.detail << '\n';
    }
    return os.str();
  }
};

// Checks a solution against the instance it claims to solve. Stored unit data
// is checked both for internal consistency (battery, synchronization, kind)
// and against values recomputed from the route. Throws StructuralError when
// the route references a location that does not exist.
inline ValidationReport validate_solution(const Instance& raw, const Solution& s, double tol = 1e-6) {
  ValidationReport rep;
  auto flag = [&](std::string check, int unit, std::string detail) {
    rep.violations.push_back({std::move(check), unit, std::move(detail)});
  };

  const auto norm = normalize_observations(raw);
  const Instance& inst = norm.instance;
  const auto m = build_travel_matrices(inst);
  const BatteryParams p = battery_params(inst);
  const int n = inst.size();

  for (int loc : s.route)
    if (loc < 0 || loc > n) throw StructuralError("location id " + std::to_string(loc) + " not in instance");

  // each location visited exactly once
  bool route_ok = true;
  if (s.route.size() < 2 || s.route.front() != 0 || s.route.back() != 0) {
    flag("coverage", -1, "route must start and end at the depot");
    route_ok = false;
  }
  std::vector<int> visits(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t k = 1; k + 1 < s.route.size(); ++k) ++visits[static_cast<std::size_t>(s.route[k])];
  for (int loc = 1; loc <= n; ++loc) {
    if (visits[static_cast<std::size_t>(loc)] != 1) {
      flag("coverage", -1, "location " + std::to_string(loc) + " visited " +
                               std::to_string(visits[static_cast<std::size_t>(loc)]) + " times");
      route_ok = false;
    }
  }
  if (visits[0] != 0) {
    flag("coverage", -1, "depot visited inside the route");
    route_ok = false;
  }

  if (std::abs(s.obs_offset - norm.obs_offset) > tol)
    flag("offset", -1, "observation offset " + std::to_string(s.obs_offset) + " != " + std::to_string(norm.obs_offset));

  // stored values alone
  double stored_total = s.obs_offset;
  for (std::size_t k = 0; k < s.units.size(); ++k) {
    const auto& u = s.units[k];
    const int idx = static_cast<int>(k);
    stored_total += u.cost;
    if (u.kind != UnitKind::Shipment) {
      if (u.drone_time > p.battery + tol)
        flag("battery", idx, "drone time " + std::to_string(u.drone_time) + " s exceeds battery");
      if (u.truck_time > p.battery + tol)
        flag("sync", idx, "truck time " + std::to_string(u.truck_time) + " s exceeds battery");
    }
    const bool single = u.end == u.begin + 1;
    if (u.kind == UnitKind::Shipment && !(single && u.begin % 2 == 0))
      flag("kind", idx, "shipment must cover exactly one travel task");
    if (u.kind == UnitKind::Holding && !(single && u.begin % 2 == 1))
      flag("kind", idx, "holding must cover exactly one observation task");
    if (u.kind == UnitKind::Nested && single)
      flag("kind", idx, "single-task unit must be a shipment or holding");
  }
  if (std::abs(stored_total - s.makespan) > tol)
    flag("makespan", -1, "stored makespan " + std::to_string(s.makespan) + " != sum of unit costs " +
                             std::to_string(stored_total));

  if (!route_ok) {
    rep.recomputed_makespan = stored_total;
    return rep;
  }

  const auto seq = build_task_sequence(s.route, inst, m);
  const int L = seq.task_count();

  if (n == 0 && s.units.empty()) {
    rep.recomputed_makespan = s.obs_offset;
    if (std::abs(s.makespan - s.obs_offset) > tol) flag("makespan", -1, "empty mission must cost only the offset");
    return rep;
  }

  // contiguity over (0, L]
  int expect = 0;
  bool spans_ok = true;
  for (std::size_t k = 0; k < s.units.size(); ++k) {
    const auto& u = s.units[k];
    if (u.begin != expect || u.end <= u.begin || u.end > L) {
      flag("contiguity", static_cast<int>(k), "span (" + std::to_string(u.begin) + "," + std::to_string(u.end) +
                                                  "] does not continue at " + std::to_string(expect));
      spans_ok = false;
      break;
    }
    expect = u.end;
  }
  if (spans_ok && expect != L) {
    flag("contiguity", -1, "units cover tasks up to " + std::to_string(expect) + " of " + std::to_string(L));
    spans_ok = false;
  }
  if (!spans_ok) {
    rep.recomputed_makespan = stored_total;
    return rep;
  }

  // recomputation
  double total = s.obs_offset;
  bool after_ship = false;
  for (std::size_t k = 0; k < s.units.size(); ++k) {
    const auto& u = s.units[k];
    const int idx = static_cast<int>(k);
    const auto c = unit_cost(seq, m, u.begin, u.end, after_ship, p);
    if (!c) {
      flag("battery", idx, "span exceeds the battery when recomputed");
      after_ship = false;
      continue;
    }
    const auto ref = make_unit(seq, u.begin, u.end, *c);
    if (ref.kind != u.kind) flag("kind", idx, std::string("expected ") + to_string(ref.kind));
    if (ref.locations != u.locations) flag("coverage", idx, "covered locations differ from the route");
    if (std::abs(ref.drone_time - u.drone_time) > tol)
      flag("mismatch", idx, "D " + std::to_string(u.drone_time) + " != " + std::to_string(ref.drone_time));
    if (std::abs(ref.truck_time - u.truck_time) > tol)
      flag("mismatch", idx, "T " + std::to_string(u.truck_time) + " != " + std::to_string(ref.truck_time));
    if (ref.charged != u.charged) flag("mismatch", idx, "start swap charge flag");
    if (std::abs(ref.cost - u.cost) > tol)
      flag("mismatch", idx, "cost " + std::to_string(u.cost) + " != " + std::to_string(ref.cost));
    total += ref.cost;
    after_ship = ref.kind == UnitKind::Shipment;
  }
  rep.recomputed_makespan = total;
  if (std::abs(total - s.makespan) > tol)
    flag("makespan", -1, "stored makespan " + std::to_string(s.makespan) + " != recomputed " + std::to_string(total));
  return rep;
}

}  // namespace nvrp
