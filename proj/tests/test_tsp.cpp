#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "nestedvrp/nestedvrp.hpp"
#include "oracles.hpp"

using namespace nvrp;

namespace {

bool is_tour(const Tour& t, int n) {
  if (t.order.size() != static_cast<std::size_t>(n) + 2 || t.order.front() != 0 || t.order.back() != 0) return false;
  std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t k = 1; k + 1 < t.order.size(); ++k) seen[static_cast<std::size_t>(t.order[k])]++;
  for (int i = 1; i <= n; ++i)
    if (seen[static_cast<std::size_t>(i)] != 1) return false;
  return true;
}

}  // namespace

TEST(TspExact, SingleLocationForcedTour) {
  const auto m = build_travel_matrices(fixture::single());
  const auto t = solve_tsp_exact(m.drone);
  EXPECT_EQ(t.order, (std::vector<int>{0, 1, 0}));
  EXPECT_NEAR(t.length, 200.0, 1e-9);
}

TEST(TspExact, Desk3Triangle) {
  const auto m = build_travel_matrices(fixture::desk3());
  EXPECT_NEAR(solve_tsp_exact(m.drone).length, 300.0, 1e-9);
}

TEST(TspExact, MatchesPermutationOracle) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = generate({Pattern::Uniform, 6 + static_cast<int>(seed % 3), 1.0, seed});
    const auto m = build_travel_matrices(inst);
    const auto t = solve_tsp_exact(m.drone);
    ASSERT_TRUE(is_tour(t, inst.size()));
    EXPECT_NEAR(t.length, path_length(t.order, m.drone), 1e-9);
    EXPECT_NEAR(t.length, oracle::tsp_min(oracle::times(inst).drone), 1e-9);
  }
}

TEST(TspExact, SizeLimit) {
  const auto m = build_travel_matrices(generate({Pattern::Uniform, kTspExactMax + 1, 1.0, 1}));
  EXPECT_THROW(solve_tsp_exact(m.drone), SizeError);
}

TEST(TspHeuristic, SingleLocationMatchesExact) {
  const auto m = build_travel_matrices(fixture::single());
  EXPECT_EQ(solve_tsp_heuristic(m.drone).order, solve_tsp_exact(m.drone).order);
}

TEST(TspHeuristic, WithinFifteenPercentAtTwelve) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = build_travel_matrices(generate({Pattern::Uniform, 12, 1.0, seed}));
    const auto exact = solve_tsp_exact(m.drone);
    const auto heur = solve_tsp_heuristic(m.drone, seed);
    EXPECT_LE(exact.length, heur.length + 1e-9);
    EXPECT_LE(heur.length, 1.15 * exact.length);
  }
}

TEST(TspHeuristic, CollinearPoints) {
  Instance inst;
  // deliberately shuffled along a line so nearest neighbor has to come back
  const double xs[] = {0, 7, 3, 10, 1, 6, 9, 2};
  for (int i = 0; i < 8; ++i) inst.locations.push_back({i, xs[i], 0.0, 0.0});
  const auto m = build_travel_matrices(inst);
  const double span_time = 10.0 * inst.unit_scale / inst.drone_speed;
  EXPECT_NEAR(solve_tsp_heuristic(m.drone).length, 2.0 * span_time, 1e-9);
}

TEST(TspHeuristic, TwoOptLocalOptimum) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = generate({Pattern::DoubleCenter, 60, 1.0, seed});
    const auto m = build_travel_matrices(inst);
    const auto t = solve_tsp_heuristic(m.drone, seed);
    ASSERT_TRUE(is_tour(t, inst.size()));
    const auto& o = t.order;
    for (std::size_t i = 1; i + 1 < o.size(); ++i)
      for (std::size_t j = i + 1; j + 1 < o.size(); ++j) {
        const double delta = m.drone(o[i - 1], o[j]) + m.drone(o[i], o[j + 1]) - m.drone(o[i - 1], o[i]) -
                             m.drone(o[j], o[j + 1]);
        ASSERT_GE(delta, -1e-9) << "improving exchange at " << i << "," << j;
      }
  }
}

TEST(TspHeuristic, DeterministicGivenSeed) {
  const auto m = build_travel_matrices(generate({Pattern::Uniform, 80, 1.0, 3}));
  EXPECT_EQ(solve_tsp_heuristic(m.drone, 4).order, solve_tsp_heuristic(m.drone, 4).order);
}

TEST(TspHeuristic, OpenPathKeepsEndpoints) {
  const auto inst = generate({Pattern::Uniform, 10, 1.0, 8});
  const auto m = build_travel_matrices(inst);
  const std::vector<int> interior{3, 9, 1, 6, 2};
  auto order = solve_path_heuristic(m.drone, 4, interior, 7, 0);
  ASSERT_EQ(order.size(), interior.size());
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{1, 2, 3, 6, 9}));
}
