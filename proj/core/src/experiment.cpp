#include "ar3/experiment.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ar3/optimality.hpp"

namespace ar3 {

std::string csv_header() {
  return "solver,set,n,seed,trial,iters_success,iters_total,fevals,devals,"
         "chol_count,cpu_ms,final_value,grad_norm,first_order_ok,local2_ok,"
         "necessary_ok,sufficient_ok,safeguards";
}

std::string csv_row(const TrialRow& r) {
  std::ostringstream ss;
  ss.precision(17);
  ss << r.solver << ',' << r.set << ',' << r.n << ',' << r.seed << ',' << r.trial
     << ',' << r.iters_success << ',' << r.iters_total << ',' << r.fevals << ','
     << r.devals << ',' << r.chol_count << ',' << r.cpu_ms << ',' << r.final_value
     << ',' << r.grad_norm << ',' << (r.first_order_ok ? 1 : 0) << ','
     << (r.local2_ok ? 1 : 0) << ',' << (r.necessary_ok ? 1 : 0) << ','
     << (r.sufficient_ok ? 1 : 0) << ',' << r.safeguards;
  return ss.str();
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base, int n, int trial) {
  std::uint64_t z = mix64(base);
  z = mix64(z ^ (static_cast<std::uint64_t>(n) << 1));
  z = mix64(z ^ (static_cast<std::uint64_t>(trial) + 0x51ull));
  return z;
}

namespace {

TrialRow run_trial(const BenchOptions& opt, int n, int trial) {
  GenSpec spec = standard_spec(opt.set, n, trial_seed(opt.seed, n, trial), opt.rank);
  if (opt.sigma_override) spec.sigma = *opt.sigma_override;
  if (opt.c_override) spec.c = *opt.c_override;
  const QuarticModel m = generate(spec);

  TrialRow row;
  row.solver = opt.solver;
  row.set = to_string(opt.set);
  row.n = n;
  row.seed = spec.seed;
  row.trial = trial;

  Vector s;
  const auto t0 = std::chrono::steady_clock::now();
  if (opt.solver == "dtm") {
    DtmConfig cfg;
    cfg.mode = opt.mode;
    cfg.rule = opt.rule;
    cfg.rank = opt.rank;
    cfg.eps = opt.tol;
    DtmResult res = dtm_minimize(m, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    row.cpu_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.iters_success = res.trace.successful;
    row.iters_total = res.trace.total;
    row.fevals = res.trace.function_evals;
    row.devals = res.trace.derivative_evals;
    row.chol_count = res.trace.cholesky_count;
    row.safeguards = res.trace.safeguards;
    row.final_value = res.value;
    row.grad_norm = res.grad_norm;
    s = res.s;
  } else if (opt.solver == "arc") {
    ArcConfig cfg;
    cfg.tol = opt.tol;
    ArcResult res = arc_minimize_model(m, Vector::Zero(n), cfg);
    const auto t1 = std::chrono::steady_clock::now();
    row.cpu_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.iters_success = res.accepted;
    row.iters_total = res.iterations;
    row.fevals = res.function_evals;
    row.devals = res.derivative_evals;
    row.chol_count = res.cholesky_count;
    row.safeguards = 0;
    row.final_value = res.value;
    row.grad_norm = res.grad_norm;
    s = res.x;
  } else {
    throw std::invalid_argument("unknown solver: " + opt.solver);
  }

  const OptimalityReport rep = classify(m, s, opt.cert_tol);
  row.first_order_ok = rep.first_order_ok;
  row.local2_ok = rep.local2_ok;
  row.necessary_ok = rep.necessary_ok;
  row.sufficient_ok = rep.sufficient_ok;
  return row;
}

}  // namespace

BenchResult run_bench(const BenchOptions& opt, std::ostream* log) {
  if (opt.trials < 1) throw std::invalid_argument("bench: trials >= 1");
  BenchResult out;

  std::ofstream csv;
  if (!opt.csv_path.empty()) {
    csv.open(opt.csv_path);
    if (!csv) throw std::runtime_error("cannot write " + opt.csv_path);
    csv << csv_header() << '\n' << std::flush;
  }

  for (int n : opt.ns) {
    double sum_iters = 0.0, sum_fe = 0.0, sum_de = 0.0, sum_ms = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
      TrialRow row = run_trial(opt, n, t);
      if (csv.is_open()) csv << csv_row(row) << '\n' << std::flush;
      sum_iters += static_cast<double>(row.iters_success);
      sum_fe += static_cast<double>(row.fevals);
      sum_de += static_cast<double>(row.devals);
      sum_ms += row.cpu_ms;
      out.rows.push_back(std::move(row));
    }
    if (log != nullptr) {
      const double k = opt.trials;
      *log << opt.solver << " set=" << to_string(opt.set) << " n=" << n
           << " trials=" << opt.trials << " mean_iters_success=" << sum_iters / k
           << " mean_fevals=" << sum_fe / k << " mean_devals=" << sum_de / k
           << " mean_cpu_ms=" << sum_ms / k << '\n';
    }
  }
  return out;
}

std::vector<SweepPoint> run_sweep(const SweepOptions& opt, std::ostream* log) {
  if (opt.steps < 2) throw std::invalid_argument("sweep: steps >= 2");
  if (opt.param != "sigma" && opt.param != "c")
    throw std::invalid_argument("sweep: param must be sigma or c");

  std::ofstream csv;
  if (!opt.base.csv_path.empty()) {
    csv.open(opt.base.csv_path);
    if (!csv) throw std::runtime_error("cannot write " + opt.base.csv_path);
    csv << csv_header() << '\n' << std::flush;
  }

  std::vector<SweepPoint> points;
  for (int step = 0; step < opt.steps; ++step) {
    const double v = opt.from + (opt.to - opt.from) * step / (opt.steps - 1);
    BenchOptions b = opt.base;
    b.csv_path.clear();
    if (opt.param == "sigma")
      b.sigma_override = v;
    else
      b.c_override = v;

    SweepPoint pt;
    pt.value = v;
    int suff = 0, nec = 0, count = 0;
    for (int n : b.ns) {
      for (int t = 0; t < b.trials; ++t) {
        TrialRow row = run_trial(b, n, t);
        if (csv.is_open()) csv << csv_row(row) << '\n' << std::flush;
        suff += row.sufficient_ok ? 1 : 0;
        nec += row.necessary_ok ? 1 : 0;
        ++count;
      }
    }
    pt.trials = count;
    pt.sufficient_fraction = static_cast<double>(suff) / count;
    pt.necessary_fraction = static_cast<double>(nec) / count;
    if (log != nullptr) {
      *log << "sweep " << opt.param << '=' << v << " sufficient=" << suff << '/'
           << count << " necessary=" << nec << '/' << count << '\n';
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace ar3
