#include <benchmark/benchmark.h>

#include <vector>

#include "imdet/detector.hpp"
#include "imdet/linkmodel.hpp"
#include "imdet/rng.hpp"
#include "imdet/spectrum.hpp"

namespace {

using namespace imdet;

spectrum::CarrierConfig carrier_with(int n_prb) {
  spectrum::CarrierConfig c;
  c.n_prb = n_prb;
  c.n_prb_control = 0;
  c.bandwidth_hz = n_prb * c.n_sc_per_prb * c.subcarrier_spacing_hz;
  return c;
}

// Per-record detection against N_PRB; the fitted complexity should be O(N).
void BM_DetectRecord(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto carrier = carrier_with(n);
  std::vector<linkmodel::MeasurementRecord> records;
  for (int i = 0; i < 64; ++i) {
    linkmodel::ScenarioSpec s;
    s.clutter_sigma_db = 0.5;
    s.im_present = i % 2 == 0;
    s.slope_db_per_prb = 8.0 / n;
    records.push_back(
        linkmodel::synth_record(carrier, linkmodel::LinkBudget{}, s, record_seed(1, i)));
  }
  const detector::DetectorParams params;
  std::size_t i = 0;
  for (auto _ : state) {
    auto r = detector::detect_record(records[i], carrier, params);
    benchmark::DoNotOptimize(r);
    i = (i + 1) % records.size();
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DetectRecord)->RangeMultiplier(2)->Range(25, 1600)->Complexity(benchmark::oN);

void BM_OlsFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    y[i] = -120.0 + 5.0 * x[i] + rng.normal(0.0, 0.5);
  }
  for (auto _ : state) {
    auto f = detector::ols_fit(x, y);
    benchmark::DoNotOptimize(f);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OlsFit)->RangeMultiplier(2)->Range(25, 1600)->Complexity(benchmark::oN);

void BM_SpectralSupport(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = spectrum::spectral_support(p, 10e6, 1u << 14);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SpectralSupport)->DenseRange(1, 5);

void BM_SynthDataset(benchmark::State& state) {
  const linkmodel::DatasetSpec spec;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto m = linkmodel::synth_dataset(spec, ++seed);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_SynthDataset);

}  // namespace
BENCHMARK_MAIN();
