#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "nestedvrp/nestedvrp.hpp"
#include "oracles.hpp"

using namespace nvrp;

namespace {

// Solution stub whose units carry the given interval-between-rendezvous values.
Solution with_ibrs(const std::vector<double>& ibrs) {
  Solution s;
  int b = 0;
  for (double ibr : ibrs) {
    NestedUnit u;
    u.begin = b;
    u.end = b + 2;
    u.ibr = ibr;
    b += 2;
    s.units.push_back(u);
  }
  return s;
}

}  // namespace

TEST(NsParams, Validation) {
  NsParams p;
  EXPECT_NO_THROW(check_params(p));
  p.beta = 0.0;
  EXPECT_THROW(check_params(p), ParameterError);
  p = {};
  p.beta = 1.5;
  EXPECT_THROW(check_params(p), ParameterError);
  p = {};
  p.n_unch = 0;
  EXPECT_THROW(check_params(p), ParameterError);
  p = {};
  p.n_max = 0;
  EXPECT_THROW(check_params(p), ParameterError);
  EXPECT_EQ(NsParams::defaults_for(10).n_max, 20);
  EXPECT_EQ(NsParams::defaults_for(11).n_max, 50);
}

TEST(Initialize, Desk3) {
  const auto inst = fixture::desk3();
  EXPECT_NEAR(initialize(inst).makespan, oracle::exact_min(inst), 1e-9);
}

TEST(Initialize, SingleLocation) {
  const auto s = initialize(fixture::single());
  EXPECT_EQ(s.route, (std::vector<int>{0, 1, 0}));
  EXPECT_TRUE(validate_solution(fixture::single(), s).ok());
}

TEST(Initialize, GeneratedInstanceIsValid) {
  const auto inst = generate({Pattern::Uniform, 20, 1.0, 7});
  const auto s = initialize(inst);
  const auto rep = validate_solution(inst, s);
  EXPECT_TRUE(rep.ok()) << rep.summary();
}

TEST(Destroy, PoolSizeArithmetic) {
  NsParams p;
  p.beta = 0.34;
  const auto s = with_ibrs({850.0, 600.0, 200.0});  // slacks 50, 300, 700
  EXPECT_EQ(slack_pool(s, p, 900.0), std::vector<int>{2});
  p.beta = 1.0;
  EXPECT_EQ(slack_pool(s, p, 900.0), (std::vector<int>{2, 1, 0}));
}

TEST(Destroy, FirstUnitPairsWithSuccessor) {
  NsParams p;
  p.beta = 0.2;
  auto s = with_ibrs({100.0, 800.0, 800.0, 800.0, 800.0});
  s.route = {0, 1, 2, 3, 4, 5, 0};
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const auto d = destroy(s, p, 900.0, rng);
    ASSERT_TRUE(d);
    EXPECT_EQ(d->chosen, 0);
    EXPECT_EQ(d->first, 0);
    EXPECT_EQ(d->begin, 0);
    EXPECT_EQ(d->end, 4);
  }
}

TEST(Destroy, LastUnitPairsWithPredecessor) {
  NsParams p;
  p.beta = 0.2;
  auto s = with_ibrs({800.0, 800.0, 800.0, 800.0, 100.0});
  s.route = {0, 1, 2, 3, 4, 5, 0};
  std::mt19937_64 rng(1);
  const auto d = destroy(s, p, 900.0, rng);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->first, 3);
}

TEST(Destroy, SingleUnitIsIdentity) {
  std::mt19937_64 rng(1);
  EXPECT_FALSE(destroy(with_ibrs({100.0}), NsParams{}, 900.0, rng));
}

TEST(Destroy, SpanBoundaryLocations) {
  const auto inst = generate({Pattern::Uniform, 12, 2.0, 4});
  const auto pr = make_problem(inst);
  const auto s = initialize(pr);
  ASSERT_GE(s.units.size(), 3u);
  const auto d = describe_destruction(s, 1, 1);
  EXPECT_EQ(d.span.start, boundary_location(s.route, s.units[1].begin));
  EXPECT_EQ(d.span.end, boundary_location(s.route, s.units[2].end));
  std::vector<int> covered = s.units[1].locations;
  covered.insert(covered.end(), s.units[2].locations.begin(), s.units[2].locations.end());
  EXPECT_EQ(d.free_locations, covered);
  EXPECT_EQ(d.span.ctx.after_shipment, s.units[0].kind == UnitKind::Shipment);
}

TEST(Reconstruct, SameUnitsSameMakespan) {
  const auto inst = generate({Pattern::SingleCenter, 15, 2.0, 6});
  const auto pr = make_problem(inst);
  const auto s = initialize(pr);
  for (int first = 0; first + 1 < static_cast<int>(s.units.size()); ++first) {
    const auto rc = reconstruct(s, describe_destruction(s, first, first), pr);
    EXPECT_LE(rc.candidate.makespan, s.makespan + 1e-9);
    const auto rep = validate_solution(inst, rc.candidate);
    ASSERT_TRUE(rep.ok()) << rep.summary();
  }
}

TEST(Reconstruct, MergesTwoUnits) {
  // incumbent: (0,3] and (3,5] on DESK-3 at 400 + 300 s; the open span is the
  // whole mission, so the best rebuild is the global optimum
  const auto inst = fixture::desk3();
  const auto pr = make_problem(inst);
  const auto seq = build_task_sequence({0, 1, 2, 0}, inst, pr.m);
  Solution s;
  s.route = {0, 1, 2, 0};
  s.units.push_back(make_unit(seq, 0, 3, *unit_cost(seq, pr.m, 0, 3, false, pr.p)));
  s.units.push_back(make_unit(seq, 3, 5, *unit_cost(seq, pr.m, 3, 5, false, pr.p)));
  s.makespan = makespan(s);
  ASSERT_NEAR(s.makespan, 700.0, 1e-9);
  const auto rc = reconstruct(s, describe_destruction(s, 0, 0), pr);
  EXPECT_NEAR(rc.candidate.makespan, oracle::exact_min(inst), 1e-9);
  EXPECT_TRUE(validate_solution(inst, rc.candidate).ok());
}

TEST(Accept, Rules) {
  EXPECT_TRUE(accept(500.0, 600.0, 0.99));
  EXPECT_TRUE(accept(700.0, 600.0, 0.3));
  EXPECT_FALSE(accept(700.0, 600.0, 0.7));
  EXPECT_FALSE(accept(600.0, 600.0, 0.7));
  EXPECT_TRUE(accept(600.0, 600.0, 0.2));
}

TEST(Accept, CoinIsFair) {
  std::mt19937_64 rng(8);
  int yes = 0;
  for (int k = 0; k < 20000; ++k) yes += accept(700.0, 600.0, rng);
  EXPECT_NEAR(yes / 20000.0, 0.5, 0.02);
}

TEST(SolveNs, Desk3) {
  const auto inst = fixture::desk3();
  NsParams p = NsParams::defaults_for(2);
  EXPECT_NEAR(solve_ns(inst, p).best.makespan, oracle::exact_min(inst), 1e-9);
}

TEST(SolveNs, TraceAndStopping) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto inst = generate({Pattern::DoubleCenter, 40, 2.0, seed});
    NsParams p = NsParams::defaults_for(40);
    p.seed = seed;
    const auto r = solve_ns(inst, p);
    EXPECT_LE(r.best.makespan, r.initial_makespan + 1e-9);
    EXPECT_LE(r.iterations, p.n_max);
    ASSERT_EQ(static_cast<int>(r.trace.size()), r.iterations);
    double prev = r.initial_makespan;
    int since = 0;
    for (const auto& t : r.trace) {
      EXPECT_LE(t.best, prev + 1e-12);
      since = t.best < prev - 1e-9 ? 0 : since + 1;
      EXPECT_LE(t.best, t.incumbent + 1e-12);
      prev = t.best;
    }
    if (r.iterations < p.n_max) EXPECT_EQ(since, p.n_unch);
    EXPECT_DOUBLE_EQ(r.trace.empty() ? r.initial_makespan : r.trace.back().best, r.best.makespan);
    EXPECT_TRUE(validate_solution(inst, r.best).ok());
  }
}

TEST(SolveNs, EveryIncumbentValid) {
  const auto inst = generate({Pattern::Uniform, 30, 3.0, 21});
  const auto pr = make_problem(inst);
  NsParams p;
  std::mt19937_64 rng(4);
  auto s = initialize(pr);
  for (int it = 0; it < 30; ++it) {
    const auto d = destroy(s, p, pr.p.battery, rng);
    ASSERT_TRUE(d);
    auto rc = reconstruct(s, *d, pr, p.exact_span_limit, static_cast<std::uint64_t>(it));
    const auto rep = validate_solution(inst, rc.candidate);
    ASSERT_TRUE(rep.ok()) << rep.summary();
    if (accept(rc.candidate.makespan, s.makespan, rng)) s = std::move(rc.candidate);
  }
}

TEST(SolveNs, Deterministic) {
  const auto inst = generate({Pattern::Uniform, 50, 2.0, 3});
  NsParams p;
  p.seed = 77;
  const auto a = solve_ns(inst, p);
  const auto b = solve_ns(inst, p);
  EXPECT_EQ(to_json(a.best).dump(), to_json(b.best).dump());
  std::ostringstream ta, tb;
  write_trace_csv(ta, a);
  write_trace_csv(tb, b);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(SolveNs, CloseToExactOnSmallInstances) {
  std::mt19937_64 rng(17);
  int close = 0;
  const int trials = 40;
  for (int k = 0; k < trials; ++k) {
    const auto inst = oracle::random_instance(rng, 6);
    NsParams p = NsParams::defaults_for(6);
    p.seed = static_cast<std::uint64_t>(k);
    const double ns = solve_ns(inst, p).best.makespan;
    const double ex = solve_exact(inst).makespan;
    EXPECT_GE(ns, ex - 1e-9);
    close += ns <= 1.05 * ex;
  }
  EXPECT_GE(close, trials * 9 / 10);
}
