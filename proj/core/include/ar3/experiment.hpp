#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ar3/arc.hpp"
#include "ar3/dtm.hpp"
#include "ar3/testsets.hpp"

namespace ar3 {

// One CSV row per (instance, solve). Certificate flags come from classify()
// at cert_tol. cpu_ms times the solver call only.
struct TrialRow {
  std::string solver;
  std::string set;
  int n = 0;
  std::uint64_t seed = 0;  // the per-trial seed, reproducible standalone
  int trial = 0;
  long iters_success = 0;
  long iters_total = 0;
  long fevals = 0;
  long devals = 0;
  long chol_count = 0;
  double cpu_ms = 0.0;
  double final_value = 0.0;
  double grad_norm = 0.0;
  bool first_order_ok = false;
  bool local2_ok = false;
  bool necessary_ok = false;
  bool sufficient_ok = false;
  long safeguards = 0;
};

std::string csv_header();
std::string csv_row(const TrialRow& r);

// Per-trial seeds depend on (base, n, trial) only, never on swept parameters,
// so sweeps reuse identical instances across steps (common random numbers).
std::uint64_t trial_seed(std::uint64_t base, int n, int trial);

struct BenchOptions {
  std::string solver = "dtm";  // dtm | arc
  SetKind set = SetKind::diagonal;
  std::vector<int> ns = {100};
  int trials = 10;
  std::uint64_t seed = 42;
  DtmMode mode = DtmMode::practical;
  DtmRule rule = DtmRule::diagonal;
  int rank = 1;
  double tol = 1e-5;
  double cert_tol = 1e-6;
  std::optional<double> sigma_override;
  std::optional<double> c_override;
  std::string csv_path;  // empty: no CSV written
};

struct BenchResult {
  std::vector<TrialRow> rows;
};

// Runs trials per dimension, writes the CSV incrementally (header first, one
// flushed line per row) and prints per-dimension aggregates to log.
BenchResult run_bench(const BenchOptions& opt, std::ostream* log = nullptr);

struct SweepOptions {
  BenchOptions base;
  std::string param = "sigma";  // sigma | c
  double from = 50.0;
  double to = 300.0;
  int steps = 6;
};

struct SweepPoint {
  double value = 0.0;
  double sufficient_fraction = 0.0;
  double necessary_fraction = 0.0;
  int trials = 0;
};

// Sweeps the parameter over an inclusive linear grid with common random
// numbers across steps; prints one fraction line per step to log.
std::vector<SweepPoint> run_sweep(const SweepOptions& opt, std::ostream* log = nullptr);

}  // namespace ar3
