#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "nestedvrp/nestedvrp.hpp"

using namespace nvrp;

namespace {

Instance two_points(double truck_speed) {
  Instance inst;
  inst.truck_speed = truck_speed;
  inst.locations = {{0, 0.0, 0.0, 0.0}, {1, 30.0, 0.0, 0.0}};  // 3000 m apart
  return inst;
}

}  // namespace

TEST(TravelMatrices, DistanceOverSpeed) {
  const auto m = build_travel_matrices(two_points(30.0));
  EXPECT_DOUBLE_EQ(m.drone(0, 1), 100.0);
  EXPECT_DOUBLE_EQ(m.truck(1, 0), 100.0);
}

TEST(TravelMatrices, SlowerTruck) {
  const auto m = build_travel_matrices(two_points(15.0));
  EXPECT_DOUBLE_EQ(m.drone(0, 1), 100.0);
  EXPECT_DOUBLE_EQ(m.truck(0, 1), 200.0);
}

TEST(TravelMatrices, CoincidentPointsAreFree) {
  Instance inst;
  inst.locations = {{0, 5.0, 5.0, 0.0}, {1, 5.0, 5.0, 10.0}};
  const auto m = build_travel_matrices(inst);
  EXPECT_EQ(m.drone(0, 1), 0.0);
  EXPECT_EQ(m.truck(0, 1), 0.0);
  EXPECT_EQ(m.drone(1, 1), 0.0);
}

TEST(TravelMatrices, RejectsBadSpeeds) {
  auto inst = two_points(30.0);
  inst.drone_speed = 0.0;
  EXPECT_THROW(build_travel_matrices(inst), ParameterError);
  inst = two_points(-1.0);
  EXPECT_THROW(build_travel_matrices(inst), ParameterError);
}

TEST(TravelMatrices, TriangleInequalityAndOrdering) {
  const auto inst = generate({Pattern::Uniform, 60, 2.0, 11});
  const auto m = build_travel_matrices(inst);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, inst.size());
  for (int t = 0; t < 1000; ++t) {
    const int i = pick(rng), j = pick(rng), k = pick(rng);
    EXPECT_LE(m.drone(i, k), m.drone(i, j) + m.drone(j, k) + 1e-9);
    EXPECT_LE(m.truck(i, k), m.truck(i, j) + m.truck(j, k) + 1e-9);
    EXPECT_EQ(m.drone(i, j), m.drone(j, i));
    EXPECT_LE(m.drone(i, j), m.truck(i, j));
  }
}

TEST(Normalize, ShortObservationUnchanged) {
  auto inst = fixture::single(250.0);
  const auto n = normalize_observations(inst);
  EXPECT_EQ(n.instance.locations[1].obs_time, 250.0);
  EXPECT_EQ(n.obs_offset, 0.0);
  EXPECT_TRUE(n.forced_holding.empty());
}

TEST(Normalize, FoldsWholeBatteries) {
  const auto n = normalize_observations(fixture::single(2000.0));
  EXPECT_DOUBLE_EQ(n.instance.locations[1].obs_time, 200.0);
  EXPECT_DOUBLE_EQ(n.obs_offset, 2000.0);
  EXPECT_EQ(n.forced_holding, std::vector<int>{1});
}

TEST(Normalize, ExactlyOneBattery) {
  const auto n = normalize_observations(fixture::single(900.0));
  EXPECT_DOUBLE_EQ(n.instance.locations[1].obs_time, 0.0);
  EXPECT_DOUBLE_EQ(n.obs_offset, 1000.0);
}

TEST(Normalize, Idempotent) {
  auto inst = generate({Pattern::Uniform, 10, 1.0, 3, 3000.0});
  const auto once = normalize_observations(inst);
  const auto twice = normalize_observations(once.instance);
  EXPECT_EQ(twice.obs_offset, 0.0);
  for (int i = 0; i <= inst.size(); ++i)
    EXPECT_EQ(once.instance.locations[i].obs_time, twice.instance.locations[i].obs_time);
}

TEST(Normalize, RejectsNegativeObservation) {
  EXPECT_THROW(normalize_observations(fixture::single(-1.0)), ParameterError);
}

TEST(Makespan, SumsUnitsAndOffset) {
  Solution s;
  EXPECT_EQ(makespan(s), 0.0);
  NestedUnit u;
  u.cost = 600.0;
  s.units.push_back(u);
  EXPECT_EQ(makespan(s), 600.0);
  s.obs_offset = 1000.0;
  EXPECT_EQ(makespan(s), 1600.0);
}

TEST(Makespan, Desk3SingleUnitRecost) {
  // one unit over the whole mission: 500 s of flight plus the start swap
  const auto inst = fixture::desk3();
  const auto pr = make_problem(inst);
  const auto seq = build_task_sequence({0, 1, 2, 0}, inst, pr.m);
  Solution s;
  s.route = {0, 1, 2, 0};
  s.units.push_back(make_unit(seq, 0, 5, *unit_cost(seq, pr.m, 0, 5, false, pr.p)));
  s.makespan = makespan(s);
  EXPECT_NEAR(s.makespan, 600.0, 1e-9);
  EXPECT_TRUE(validate_solution(inst, s).ok());
}

TEST(Makespan, RecostReproducesStoredValue) {
  const auto inst = generate({Pattern::SingleCenter, 25, 2.0, 4});
  const auto pr = make_problem(inst);
  auto s = initialize(pr);
  const double before = s.makespan;
  recost(s, build_task_sequence(s.route, pr.instance(), pr.m), pr.m, pr.p);
  EXPECT_NEAR(s.makespan, before, 1e-6);
}

TEST(Validate, OptimalDesk3Passes) {
  const auto inst = fixture::desk3();
  const auto s = solve_exact(inst);
  const auto rep = validate_solution(inst, s);
  EXPECT_TRUE(rep.ok()) << rep.summary();
  EXPECT_NEAR(rep.recomputed_makespan, s.makespan, 1e-9);
}

TEST(Validate, ForgedBatteryFails) {
  const auto inst = fixture::desk3();
  auto s = solve_exact(inst);
  int idx = -1;
  for (std::size_t k = 0; k < s.units.size(); ++k)
    if (s.units[k].kind != UnitKind::Shipment) idx = static_cast<int>(k);
  ASSERT_GE(idx, 0);
  s.units[static_cast<std::size_t>(idx)].drone_time = inst.battery + 1.0;
  const auto rep = validate_solution(inst, s);
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations) found |= v.check == "battery" && v.unit == idx;
  EXPECT_TRUE(found) << rep.summary();
}

TEST(Validate, MissingLocationFails) {
  const auto inst = fixture::desk3();
  auto s = solve_exact(inst);
  s.route = {0, 1, 0};
  const auto rep = validate_solution(inst, s);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations.front().check, "coverage");
}

TEST(Validate, UnknownLocationIsStructural) {
  const auto inst = fixture::desk3();
  auto s = solve_exact(inst);
  s.route = {0, 1, 7, 0};
  EXPECT_THROW(validate_solution(inst, s), StructuralError);
}

TEST(Validate, WrongMakespanAndGapsFlagged) {
  const auto inst = fixture::desk3();
  auto s = solve_exact(inst);
  s.makespan += 1.0;
  auto rep = validate_solution(inst, s);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations.front().check, "makespan");

  s = solve_exact(inst);
  s.units.pop_back();
  s.makespan = makespan(s);
  rep = validate_solution(inst, s);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations.front().check, "contiguity");
}

TEST(Solution, DerivedStopsAndTruckArcs) {
  const auto inst = fixture::desk3();
  const auto pr = make_problem(inst);
  const auto seq = build_task_sequence({0, 1, 2, 0}, inst, pr.m);
  Solution s;
  s.route = {0, 1, 2, 0};
  s.units.push_back(make_unit(seq, 0, 3, *unit_cost(seq, pr.m, 0, 3, false, pr.p)));
  s.units.push_back(make_unit(seq, 3, 5, *unit_cost(seq, pr.m, 3, 5, false, pr.p)));
  const auto stops = swap_stops(s);
  ASSERT_EQ(stops.size(), 3u);
  EXPECT_EQ(stops[1].location, 2);
  EXPECT_TRUE(stops[1].before_observation);
  EXPECT_EQ(truck_arcs(s), (std::vector<std::pair<int, int>>{{0, 2}, {2, 0}}));
  EXPECT_EQ(swap_count(s), 2);
}
