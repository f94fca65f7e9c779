#pragma once

#include <atomic>
#include <exception>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nestedvrp/bound.hpp"
#include "nestedvrp/core.hpp"
#include "nestedvrp/generator.hpp"
#include "nestedvrp/ns.hpp"

namespace nvrp {

struct BenchGrid {
  std::vector<Pattern> patterns;
  std::vector<int> sizes;
  std::vector<double> alphas;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace detail

// "u,dc:20,50:1,2" -> patterns x sizes x alphas.
inline BenchGrid parse_grid(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) throw ParameterError("grid must look like patterns:sizes:alphas, e.g. u,dc:20,50:1,2");
  BenchGrid g;
  try {
    for (const auto& p : detail::split(parts[0], ',')) g.patterns.push_back(pattern_from_string(p));
    for (const auto& n : detail::split(parts[1], ',')) g.sizes.push_back(std::stoi(n));
    for (const auto& a : detail::split(parts[2], ',')) g.alphas.push_back(std::stod(a));
  } catch (const std::logic_error&) {
    throw ParameterError("cannot parse grid '" + text + "'");
  }
  if (g.patterns.empty() || g.sizes.empty() || g.alphas.empty()) throw ParameterError("grid has an empty axis");
  return g;
}

struct BenchCase {
  GenSpec spec;
};

struct BenchRow {
  Pattern pattern = Pattern::Uniform;
  int n = 0;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  double c_ns = 0.0;
  double c_cnu = 0.0;
  double c_lb = 0.0;
  double gap_pct = 0.0;
  double t_ns = 0.0;
  int iters = 0;
  int swaps = 0;
  bool lb_certified = true;
};

inline std::vector<BenchCase> expand_grid(const BenchGrid& g, int reps, std::uint64_t base_seed = 1) {
  std::vector<BenchCase> cases;
  for (auto p : g.patterns)
    for (int n : g.sizes)
      for (double a : g.alphas)
        for (int r = 0; r < reps; ++r) {
          BenchCase c;
          c.spec.pattern = p;
          c.spec.n = n;
          c.spec.alpha = a;
          c.spec.seed = base_seed + static_cast<std::uint64_t>(r);
          cases.push_back(c);
        }
  return cases;
}

inline BenchRow run_case(const BenchCase& c) {
  const Instance inst = generate(c.spec);
  const Problem pr = make_problem(inst);
  NsParams params = NsParams::defaults_for(c.spec.n);
  params.seed = c.spec.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = solve_ns(pr, params);
  const auto t1 = std::chrono::steady_clock::now();
  const auto lb = lower_bound(pr);
  BenchRow row;
  row.pattern = c.spec.pattern;
  row.n = c.spec.n;
  row.alpha = c.spec.alpha;
  row.seed = c.spec.seed;
  row.c_ns = res.best.makespan;
  row.c_cnu = res.initial_makespan;
  row.c_lb = lb.value;
  row.lb_certified = lb.certified;
  row.gap_pct = lb.value > 0 ? 100.0 * (row.c_ns - lb.value) / lb.value : 0.0;
  row.t_ns = std::chrono::duration<double>(t1 - t0).count();
  row.iters = res.iterations;
  row.swaps = swap_count(res.best);
  return row;
}

// Runs every case on a pool of `workers` threads; rows keep case order.
inline std::vector<BenchRow> run_bench(const std::vector<BenchCase>& cases, unsigned workers) {
  std::vector<BenchRow> rows(cases.size());
  if (workers == 0) workers = 1;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cases.size());
  auto work = [&] {
    for (std::size_t k = next++; k < cases.size(); k = next++) {
      try {
        rows[k] = run_case(cases[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "pattern,N,alpha,seed,C_ns,C_cnu,C_lb,gap_pct,T_ns_s,iters,n_swaps\n";
  std::ostringstream line;
  line.precision(10);
  for (const auto& r : rows) {
    line.str("");
    line << to_string(r.pattern) << ',' << r.n << ',' << r.alpha << ',' << r.seed << ',' << r.c_ns << ','
         << r.c_cnu << ',' << r.c_lb << ',' << r.gap_pct << ',' << r.t_ns << ',' << r.iters << ',' << r.swaps
         << '\n';
    os << line.str();
  }
}

}  // namespace nvrp
