// Command-line front end: solve a model file, run benchmark suites, check a
// candidate point's certificates, or generate instance files.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ar3/experiment.hpp"
#include "ar3/optimality.hpp"
#include "ar3/serialization.hpp"
#include "ar3/testsets.hpp"

namespace {

ar3::DtmMode parse_mode(const std::string& s) {
  if (s == "practical") return ar3::DtmMode::practical;
  if (s == "variant1") return ar3::DtmMode::variant1;
  throw CLI::ValidationError("--mode must be practical or variant1");
}

ar3::DtmRule parse_rule(const std::string& s) {
  if (s == "diagonal") return ar3::DtmRule::diagonal;
  if (s == "lowrank") return ar3::DtmRule::lowrank;
  throw CLI::ValidationError("--rule must be diagonal or lowrank");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    ar3::write_text_file(out_path, text + "\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quartically regularized cubic model toolkit"};
  app.require_subcommand(1);

  // solve
  std::string solve_model, solve_out;
  std::string solve_solver = "dtm", solve_mode = "practical", solve_rule = "diagonal";
  int solve_rank = 1;
  double solve_tol = 1e-5;
  CLI::App* solve = app.add_subcommand("solve", "minimize a model file");
  solve->add_option("--model", solve_model, "model JSON file")->required();
  solve->add_option("--solver", solve_solver, "dtm | arc");
  solve->add_option("--mode", solve_mode, "practical | variant1");
  solve->add_option("--rule", solve_rule, "diagonal | lowrank");
  solve->add_option("--rank", solve_rank, "factor count for the lowrank rule");
  solve->add_option("--tol", solve_tol, "gradient norm target");
  solve->add_option("--out", solve_out, "result JSON path (default stdout)");

  // bench
  std::string bench_set = "diagonal", bench_csv;
  std::string bench_solver = "dtm", bench_mode = "practical", bench_rule = "diagonal";
  std::vector<int> bench_ns = {100};
  int bench_trials = 10, bench_rank = 1, bench_steps = 6;
  std::uint64_t bench_seed = 42;
  double bench_tol = 1e-5, bench_from = 0.0, bench_to = 0.0;
  std::string bench_sweep;
  CLI::App* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--set", bench_set, "diagonal|lowrank|full|ill_hessian|ill_tensor");
  bench->add_option("--n", bench_ns, "dimensions (repeat or comma separated)")
      ->delimiter(',');
  bench->add_option("--trials", bench_trials, "trials per dimension");
  bench->add_option("--seed", bench_seed, "base seed");
  bench->add_option("--csv", bench_csv, "CSV output path");
  bench->add_option("--solver", bench_solver, "dtm | arc");
  bench->add_option("--mode", bench_mode, "practical | variant1");
  bench->add_option("--rule", bench_rule, "diagonal | lowrank");
  bench->add_option("--rank", bench_rank, "factor count for the lowrank rule");
  bench->add_option("--tol", bench_tol, "gradient norm target");
  bench->add_option("--sweep", bench_sweep, "sigma | c");
  bench->add_option("--from", bench_from, "sweep start");
  bench->add_option("--to", bench_to, "sweep end");
  bench->add_option("--steps", bench_steps, "sweep steps");

  // check
  std::string check_model, check_point;
  double check_tol = 1e-6;
  CLI::App* check = app.add_subcommand("check", "certify a candidate point");
  check->add_option("--model", check_model, "model JSON file")->required();
  check->add_option("--point", check_point, "point JSON file")->required();
  check->add_option("--tol", check_tol, "certificate slack tolerance");

  // gen
  std::string gen_set = "diagonal", gen_out;
  int gen_n = 10, gen_rank = 1;
  std::uint64_t gen_seed = 0;
  double gen_a = -1.0, gen_b = -1.0, gen_c = -1.0, gen_sigma = -1.0;
  CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--set", gen_set, "diagonal|lowrank|full|ill_hessian|ill_tensor");
  gen->add_option("--n", gen_n, "dimension");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--rank", gen_rank, "factor count (lowrank set)");
  gen->add_option("--a", gen_a, "gradient scale override");
  gen->add_option("--b", gen_b, "Hessian scale override");
  gen->add_option("--c", gen_c, "tensor scale override");
  gen->add_option("--sigma", gen_sigma, "regularization weight override");
  gen->add_option("--out", gen_out, "model JSON path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      const ar3::QuarticModel m =
          ar3::model_from_json(ar3::read_text_file(solve_model));
      if (solve_solver == "dtm") {
        ar3::DtmConfig cfg;
        cfg.mode = parse_mode(solve_mode);
        cfg.rule = parse_rule(solve_rule);
        cfg.rank = solve_rank;
        cfg.eps = solve_tol;
        const ar3::DtmResult res = ar3::dtm_minimize(m, cfg);
        emit(ar3::to_json(res), solve_out);
        return res.status == ar3::DtmStatusKind::converged ? 0 : 2;
      }
      if (solve_solver == "arc") {
        ar3::ArcConfig cfg;
        cfg.tol = solve_tol;
        const ar3::ArcResult res =
            ar3::arc_minimize_model(m, ar3::Vector::Zero(m.dim()), cfg);
        ar3::DtmResult shim;  // reuse the result schema
        shim.s = res.x;
        shim.value = res.value;
        shim.grad_norm = res.grad_norm;
        shim.status = res.converged ? ar3::DtmStatusKind::converged
                                    : ar3::DtmStatusKind::max_iterations;
        shim.trace.successful = res.accepted;
        shim.trace.total = res.iterations;
        shim.trace.function_evals = res.function_evals;
        shim.trace.derivative_evals = res.derivative_evals;
        shim.trace.cholesky_count = res.cholesky_count;
        emit(ar3::to_json(shim), solve_out);
        return res.converged ? 0 : 2;
      }
      std::cerr << "unknown solver: " << solve_solver << '\n';
      return 1;
    }

    if (bench->parsed()) {
      ar3::BenchOptions opt;
      opt.solver = bench_solver;
      opt.set = ar3::set_kind_from_string(bench_set);
      opt.ns = bench_ns;
      opt.trials = bench_trials;
      opt.seed = bench_seed;
      opt.mode = parse_mode(bench_mode);
      opt.rule = parse_rule(bench_rule);
      opt.rank = bench_rank;
      opt.tol = bench_tol;
      opt.csv_path = bench_csv;
      if (bench_sweep.empty()) {
        ar3::run_bench(opt, &std::cout);
      } else {
        ar3::SweepOptions sw;
        sw.base = opt;
        sw.param = bench_sweep;
        sw.from = bench_from;
        sw.to = bench_to;
        sw.steps = bench_steps;
        ar3::run_sweep(sw, &std::cout);
      }
      return 0;
    }

    if (check->parsed()) {
      const ar3::QuarticModel m =
          ar3::model_from_json(ar3::read_text_file(check_model));
      const ar3::Vector s = ar3::point_from_json(ar3::read_text_file(check_point));
      const ar3::OptimalityReport rep = ar3::classify(m, s, check_tol);
      std::cout << ar3::to_json(rep) << '\n';
      return 0;
    }

    if (gen->parsed()) {
      ar3::GenSpec spec = ar3::standard_spec(ar3::set_kind_from_string(gen_set),
                                             gen_n, gen_seed, gen_rank);
      if (gen_a >= 0.0) spec.a = gen_a;
      if (gen_b >= 0.0) spec.b = gen_b;
      if (gen_c >= 0.0) spec.c = gen_c;
      if (gen_sigma > 0.0) spec.sigma = gen_sigma;
      emit(ar3::to_json(ar3::generate(spec)), gen_out);
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
