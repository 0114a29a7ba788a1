#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace imdet::bench {

struct BenchOptions {
  std::vector<int> n_prb_values{25, 50, 100, 200, 400};
  int repetitions = 500;
  /// Leading repetitions discarded before averaging.
  int warmup = 50;
  /// Distinct records cycled through inside one timed repetition.
  int batch = 64;
  double clutter_sigma_db = 0.5;
  std::uint64_t seed = 1;

  /// Needs >= 4 distinct sizes spanning >= 8x and >= 100 repetitions.
  void validate() const;
};

/// Mean per-record detection time for each PRB count, from a monotonic
/// clock. The timed region holds only the regression and the threshold
/// decision; the same loop around a no-op detector is reported as
/// `noop_runtime_ns`.
struct BenchResult {
  std::vector<int> n_prb_values;
  std::vector<double> mean_runtime_ns;
  std::vector<double> noop_runtime_ns;
  /// OLS fit of mean runtime against N_PRB.
  double fit_slope_ns_per_prb = 0.0;
  double fit_intercept_ns = 0.0;
  double fit_r2 = 0.0;

  /// Runtime divided by the runtime at the smallest N_PRB.
  std::vector<double> normalized_runtime() const;
  /// runtime(2N) / runtime(N) for every N whose double was measured.
  std::vector<double> doubling_ratios() const;
};

BenchResult run_bench(const BenchOptions& options);

/// n_prb,mean_runtime_ns,noop_runtime_ns,normalized_runtime
void write_bench_csv(std::ostream& out, const BenchResult& result);

}  // namespace imdet::bench
