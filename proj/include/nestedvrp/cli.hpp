#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nestedvrp/nestedvrp.hpp"

namespace nvrp {

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitUsage = 2;

inline void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

// Seed from NESTEDVRP_SEED when the flag was not given.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NESTEDVRP_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::logic_error&) {
      throw ParameterError(std::string("NESTEDVRP_SEED is not an unsigned integer: ") + env);
    }
  }
  return fallback;
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

}  // namespace cli

// Runs the command-line driver; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Nested drone/truck routing: generate, solve, bound, validate, export, bench, plot"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a benchmark instance");
  std::string g_pattern = "u", g_out;
  int g_n = 20;
  double g_alpha = 1.0;
  std::optional<std::uint64_t> g_seed;
  std::optional<double> g_drone, g_battery, g_swap;
  gen->add_option("--pattern", g_pattern, "u, sc or dc")->check(CLI::IsMember({"u", "sc", "dc"}));
  gen->add_option("--n", g_n, "number of locations besides the depot")->check(CLI::NonNegativeNumber);
  gen->add_option("--alpha", g_alpha, "drone speed / truck speed")->check(CLI::PositiveNumber);
  gen->add_option("--seed", g_seed);
  gen->add_option("--drone-speed", g_drone);
  gen->add_option("--battery", g_battery, "battery life T_bl in seconds");
  gen->add_option("--swap", g_swap, "swap time T_s in seconds");
  gen->add_option("--out", g_out, "output JSON (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance");
  std::string s_in, s_algo = "ns", s_out, s_trace;
  NsParams s_params;
  std::optional<int> s_nmax;
  std::optional<std::uint64_t> s_seed;
  int s_max_n = kExactMaxDefault;
  solve->add_option("instance", s_in, "instance JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--algo", s_algo)->check(CLI::IsMember({"ns", "exact", "cnu"}));
  solve->add_option("--beta", s_params.beta, "destroy pool fraction");
  solve->add_option("--nunch", s_params.n_unch, "stop after this many iterations without improvement");
  solve->add_option("--nmax", s_nmax, "iteration cap (default 20 for n <= 10, else 50)");
  solve->add_option("--seed", s_seed);
  solve->add_option("--max-n", s_max_n, "largest instance accepted by --algo exact");
  solve->add_option("--out", s_out, "solution JSON (default stdout)");
  solve->add_option("--trace", s_trace, "iteration trace CSV (ns only)");

  // lb
  auto* lb = app.add_subcommand("lb", "lower bound on the makespan");
  std::string l_in;
  lb->add_option("instance", l_in)->required()->check(CLI::ExistingFile);

  // validate
  auto* val = app.add_subcommand("validate", "check a solution against its instance");
  std::string v_inst, v_sol;
  val->add_option("instance", v_inst)->required()->check(CLI::ExistingFile);
  val->add_option("solution", v_sol)->required()->check(CLI::ExistingFile);

  // export
  auto* exp = app.add_subcommand("export", "write the MIP model in LP format");
  std::string e_variant = "milp", e_in, e_out;
  exp->add_option("--variant", e_variant)->check(CLI::IsMember({"milp", "dl", "sd"}));
  exp->add_option("--in", e_in)->required()->check(CLI::ExistingFile);
  exp->add_option("--out", e_out, "LP file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark grid");
  std::string b_grid = "u:20,50:1,2", b_out;
  int b_reps = 10;
  unsigned b_workers = std::max(1u, std::thread::hardware_concurrency());
  std::optional<std::uint64_t> b_seed;
  bench->add_option("--grid", b_grid, "patterns:sizes:alphas, e.g. u,dc:20,50:1,2");
  bench->add_option("--reps", b_reps, "seeds per grid cell")->check(CLI::PositiveNumber);
  bench->add_option("--workers", b_workers, "worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--seed", b_seed, "first seed");
  bench->add_option("--out", b_out, "CSV (default stdout)");

  // plot
  auto* plot = app.add_subcommand("plot", "render a solution as SVG");
  std::string p_inst, p_sol, p_out;
  int p_size = 800;
  plot->add_option("instance", p_inst)->required()->check(CLI::ExistingFile);
  plot->add_option("solution", p_sol)->required()->check(CLI::ExistingFile);
  plot->add_option("--out", p_out)->required();
  plot->add_option("--size", p_size)->check(CLI::Range(100, 10000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return cli::kExitOk;
  } catch (const CLI::ParseError& e) {
    cli::report_error(err, "usage", e.what());
    return cli::kExitUsage;
  }

  try {
    if (*gen) {
      GenSpec spec;
      spec.pattern = pattern_from_string(g_pattern);
      spec.n = g_n;
      spec.alpha = g_alpha;
      spec.seed = cli::resolve_seed(g_seed, 0);
      spec.drone_speed = g_drone;
      spec.battery = g_battery;
      spec.swap_time = g_swap;
      cli::emit(g_out, to_json(generate(spec)).dump(2) + "\n", out);
    } else if (*solve) {
      if (!s_trace.empty() && s_algo != "ns") throw ParameterError("--trace is only available with --algo ns");
      const Instance inst = load_instance(s_in);
      const Problem pr = make_problem(inst);
      Solution sol;
      std::optional<NsResult> ns;
      if (s_algo == "exact") {
        sol = solve_exact(pr, s_max_n);
      } else if (s_algo == "cnu") {
        sol = initialize(pr);
      } else {
        NsParams params = NsParams::defaults_for(pr.size());
        params.beta = s_params.beta;
        params.n_unch = s_params.n_unch;
        if (s_nmax) params.n_max = *s_nmax;
        params.seed = cli::resolve_seed(s_seed, 0);
        ns = solve_ns(pr, params);
        sol = ns->best;
      }
      const auto rep = validate_solution(inst, sol);
      if (!rep.ok()) throw std::logic_error("solver produced an invalid solution:\n" + rep.summary());
      cli::emit(s_out, to_json(sol).dump(2) + "\n", out);
      if (!s_trace.empty()) {
        std::ofstream f(s_trace);
        if (!f) throw std::runtime_error("cannot write " + s_trace);
        write_trace_csv(f, *ns);
      }
    } else if (*lb) {
      const auto b = lower_bound(load_instance(l_in));
      std::ostringstream os;
      os.precision(12);
      os << b.value << ' ' << (b.certified ? "certified" : "estimate") << '\n';
      out << os.str();
    } else if (*val) {
      const auto rep = validate_solution(load_instance(v_inst), load_solution(v_sol));
      if (!rep.ok()) {
        out << rep.summary();
        cli::report_error(err, "invalid", std::to_string(rep.violations.size()) + " violation(s)");
        return cli::kExitInfeasible;
      }
      std::ostringstream os;
      os.precision(12);
      os << "ok " << rep.recomputed_makespan << '\n';
      out << os.str();
    } else if (*exp) {
      const auto model = build_model(load_instance(e_in), variant_from_string(e_variant));
      cli::emit(e_out, to_lp_string(model), out);
    } else if (*bench) {
      const auto cases = expand_grid(parse_grid(b_grid), b_reps, cli::resolve_seed(b_seed, 1));
      const auto rows = run_bench(cases, b_workers);
      std::ostringstream os;
      write_bench_csv(os, rows);
      cli::emit(b_out, os.str(), out);
    } else if (*plot) {
      write_text_file(p_out, render_svg(load_instance(p_inst), load_solution(p_sol), p_size));
    }
  } catch (const InfeasibleError& e) {
    cli::report_error(err, e.kind(), e.what());
    return cli::kExitInfeasible;
  } catch (const Error& e) {
    cli::report_error(err, e.kind(), e.what());
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    cli::report_error(err, "internal", e.what());
    return 3;
  }
  return cli::kExitOk;
}

}  // namespace nvrp
