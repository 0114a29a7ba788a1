#include "imdet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <set>

#include "imdet/detector.hpp"
#include "imdet/error.hpp"
#include "imdet/io.hpp"
#include "imdet/linkmodel.hpp"
#include "imdet/rng.hpp"

namespace imdet::bench {

void BenchOptions::validate() const {
  const std::set<int> distinct(n_prb_values.begin(), n_prb_values.end());
  if (distinct.size() < 4)
    throw InvalidInput("at least four distinct PRB counts are required");
  if (*distinct.begin() < 3) throw InvalidInput("PRB counts must be >= 3");
  if (*distinct.rbegin() < 8 * *distinct.begin())
    throw InvalidInput("PRB counts must span at least a factor of 8");
  if (repetitions < 100) throw InvalidInput("repetitions must be >= 100");
  if (warmup < 0) throw InvalidInput("warmup must be >= 0");
  if (batch < 1) throw InvalidInput("batch must be >= 1");
  if (!(clutter_sigma_db > 0.0)) throw InvalidInput("clutter_sigma_db must be positive");
}

std::vector<double> BenchResult::normalized_runtime() const {
  std::vector<double> out;
  if (mean_runtime_ns.empty()) return out;
  const auto smallest = std::min_element(n_prb_values.begin(), n_prb_values.end()) -
                        n_prb_values.begin();
  for (double t : mean_runtime_ns) out.push_back(t / mean_runtime_ns[smallest]);
  return out;
}

std::vector<double> BenchResult::doubling_ratios() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < n_prb_values.size(); ++i)
    for (std::size_t j = 0; j < n_prb_values.size(); ++j)
      if (n_prb_values[j] == 2 * n_prb_values[i])
        out.push_back(mean_runtime_ns[j] / mean_runtime_ns[i]);
  return out;
}

namespace {

[[gnu::noinline]] double noop_detector(const linkmodel::MeasurementRecord& r) {
  return r.rip_dbm.front();
}

template <typename Fn>
double time_per_call_ns(const std::vector<linkmodel::MeasurementRecord>& records,
                        int repetitions, int warmup, Fn&& fn) {
  using clock = std::chrono::steady_clock;
  volatile double sink = 0.0;
  clock::duration total{};
  for (int rep = 0; rep < warmup + repetitions; ++rep) {
    double acc = 0.0;
    const auto t0 = clock::now();
    for (const auto& r : records) acc += fn(r);
    const auto t1 = clock::now();
    sink = sink + acc;
    if (rep >= warmup) total += t1 - t0;
  }
  const double ns = std::chrono::duration<double, std::nano>(total).count();
  return ns / (static_cast<double>(repetitions) * static_cast<double>(records.size()));
}

}  // namespace

BenchResult run_bench(const BenchOptions& options) {
  options.validate();
  BenchResult result;
  detector::DetectorParams params;

  for (int n : options.n_prb_values) {
    spectrum::CarrierConfig carrier;
    carrier.n_prb = n;
    carrier.n_prb_control = 0;
    carrier.bandwidth_hz = n * carrier.n_sc_per_prb * carrier.subcarrier_spacing_hz;

    linkmodel::LinkBudget budget;
    std::vector<linkmodel::MeasurementRecord> records;
    for (int i = 0; i < options.batch; ++i) {
      linkmodel::ScenarioSpec sc;
      sc.clutter_sigma_db = options.clutter_sigma_db;
      sc.im_present = i % 2 == 0;
      sc.slope_db_per_prb = 8.0 / n;
      records.push_back(linkmodel::synth_record(
          carrier, budget, sc, record_seed(options.seed + n, i)));
    }

    result.n_prb_values.push_back(n);
    result.mean_runtime_ns.push_back(time_per_call_ns(
        records, options.repetitions, options.warmup,
        [&](const linkmodel::MeasurementRecord& r) {
          const auto d = detector::detect_record(r, carrier, params);
          return d.fit.slope + (d.detected ? 1.0 : 0.0);
        }));
    result.noop_runtime_ns.push_back(time_per_call_ns(
        records, options.repetitions, options.warmup, noop_detector));
  }

  std::vector<double> x(result.n_prb_values.begin(), result.n_prb_values.end());
  const auto fit = detector::ols_fit(x, result.mean_runtime_ns);
  result.fit_slope_ns_per_prb = fit.slope;
  result.fit_intercept_ns = fit.intercept;
  result.fit_r2 = fit.r_squared;
  return result;
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
  out << "n_prb,mean_runtime_ns,noop_runtime_ns,normalized_runtime\n";
  const auto norm = result.normalized_runtime();
  for (std::size_t i = 0; i < result.n_prb_values.size(); ++i)
    out << result.n_prb_values[i] << ',' << io::format_double(result.mean_runtime_ns[i])
        << ',' << io::format_double(result.noop_runtime_ns[i]) << ','
        << io::format_double(norm[i]) << '\n';
}

}  // namespace imdet::bench
