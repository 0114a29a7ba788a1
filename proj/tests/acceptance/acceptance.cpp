// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "imdet/bench.hpp"
#include "imdet/detector.hpp"
#include "imdet/io.hpp"
#include "imdet/linkmodel.hpp"
#include "imdet/rng.hpp"
#include "imdet/spectrum.hpp"
#include "imdet/tuner.hpp"

using namespace imdet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Support of the p-fold rectangle convolution is p B.
Outcome bandwidth_law() {
  const auto t0 = Clock::now();
  const double B = 10e6;
  bool ok = true;
  double worst_bins = 0.0;
  double prev_peak = 0.0;
  for (int p = 1; p <= 5; ++p) {
    const auto r = spectrum::spectral_support(p, B, 1u << 14);
    const double err_bins = std::abs(r.support_hz - p * B) / r.bin_hz;
    worst_bins = std::max(worst_bins, err_bins);
    ok = ok && err_bins <= 2.0;
    if (p > 1) ok = ok && r.peak_rel_amplitude < prev_peak;
    prev_peak = r.peak_rel_amplitude;
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 1.0;
  return {ok, fmt("worst support error %.3g bins, peak decreasing, %.3f s", worst_bins, secs)};
}

// 2. IM term slope in dBm is 10 log10(e) / N_PRB per PRB.
Outcome bound_slope() {
  spectrum::CarrierConfig c;
  linkmodel::LinkBudget b;
  const auto prof = linkmodel::rip_bound_profile(b, c, 2, 0);
  const double expected = 10.0 * std::numbers::log10e / c.n_prb;
  double worst_rel = 0.0;
  for (std::size_t i = 1; i < prof.im_term_dbm.size(); ++i) {
    const double step = prof.im_term_dbm[i] - prof.im_term_dbm[i - 1];
    worst_rel = std::max(worst_rel, std::abs(step - expected) / expected);
  }
  linkmodel::LinkBudget faint = b;
  faint.path_loss_db = 1000.0;
  const auto flat = linkmodel::rip_bound_profile(faint, c, 2, 0);
  double worst_flat = 0.0;
  for (double v : flat.bound_dbm)
    worst_flat = std::max(worst_flat, std::abs(v - flat.noise_floor_dbm));
  const bool ok = worst_rel <= 1e-9 && worst_flat <= 1e-12;
  return {ok, fmt("slope %.6f dB/PRB, worst relative error %.3g; flat-limit deviation %.3g dB",
                  expected, worst_rel, worst_flat)};
}

// 3. OLS equals an independent normal-equations solve.
Outcome ols_oracle() {
  Rng rng(20240611);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(62));
    std::vector<double> x(n);
    std::vector<double> y(n);
    const double slope = rng.uniform(-2.0, 2.0);
    const double noise = rng.uniform(0.01, 5.0);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform(0.0, 1.0);
      y[i] = -120.0 + slope * x[i] * 10.0 + rng.normal(0.0, noise);
    }
    const auto got = detector::ols_fit(x, y);
    const auto ref = testing::normal_equations_fit(x, y);
    auto rel = [](double a, double b) {
      const double s = std::max(std::abs(a), std::abs(b));
      return s == 0.0 ? 0.0 : std::abs(a - b) / s;
    };
    worst = std::max({worst, rel(got.slope, ref.b1), rel(got.intercept, ref.b0),
                      rel(got.r_squared, ref.r2)});
  }
  return {worst <= 1e-9, fmt("1000 instances, worst relative difference %.3g", worst)};
}

struct Tuned {
  tuner::TuningReport report;
  linkmodel::RipMatrix matrix;
};

Tuned tune_default(std::uint64_t seed) {
  Tuned t;
  t.matrix = linkmodel::synth_dataset(linkmodel::DatasetSpec{}, seed);
  t.report = tuner::roc_grid(t.matrix, tuner::labels_of(t.matrix),
                             tuner::kDefaultEpsLinearGrid, tuner::kDefaultEpsSlopeGrid);
  return t;
}

// 4. Default dataset: perfect ROC and confusion matrix.
Outcome default_dataset_tuning(detector::DetectorParams& best) {
  const auto t0 = Clock::now();
  const linkmodel::DatasetSpec spec;
  const auto a = tune_default(1);
  const auto b = tune_default(1);
  const double secs = seconds_since(t0) / 2.0;

  int positives = 0;
  for (const auto& r : a.matrix.records) positives += *r.label_im_present ? 1 : 0;
  const bool composition = a.matrix.size() == 100 && positives == 6 &&
                           spec.clutter_sigma_db <= 0.5 && spec.positive_rise_min_db >= 2.0;

  const auto& cm = a.report.confusion_at_best;
  const auto results = detector::detect_matrix(a.matrix, a.report.best_params);
  const auto recount = tuner::confusion(results, tuner::labels_of(a.matrix));
  const bool deterministic = b.report.best_params.eps_linear == a.report.best_params.eps_linear &&
                             b.report.best_params.eps_slope == a.report.best_params.eps_slope &&
                             b.report.confusion_at_best == cm && b.report.best_auc == a.report.best_auc;
  best = a.report.best_params;
  const bool ok = composition && a.report.best_auc == 1.0 && cm.fp == 0 && cm.fn == 0 &&
                  recount == cm && deterministic && secs < 5.0;
  return {ok, fmt("AUC %.4f at eps_linear=%.2f eps_slope=%.2f; tp=%zu fp=%zu tn=%zu fn=%zu; "
                  "deterministic=%s; %.3f s",
                  a.report.best_auc, a.report.best_params.eps_linear,
                  a.report.best_params.eps_slope, cm.tp, cm.fp, cm.tn, cm.fn,
                  deterministic ? "yes" : "no", secs)};
}

// 5. Flat floors with 0.5 dB clutter are rarely flagged.
Outcome false_positive_bound(const detector::DetectorParams& params) {
  spectrum::CarrierConfig c;
  linkmodel::LinkBudget b;
  linkmodel::ScenarioSpec s;
  s.clutter_sigma_db = 0.5;
  const int n = 10000;
  int fp = 0;
  for (int i = 0; i < n; ++i) {
    const auto rec = linkmodel::synth_record(c, b, s, record_seed(55, i));
    fp += detector::detect_record(rec, c, params).detected ? 1 : 0;
  }
  const double fpr = static_cast<double>(fp) / n;
  return {fpr <= 0.01, fmt("FPR %.4f (%d / %d)", fpr, fp, n)};
}

// 6. A single narrowband spike fits poorly.
Outcome narrowband_rejection(const detector::DetectorParams& params) {
  spectrum::CarrierConfig c;
  linkmodel::LinkBudget b;
  const auto slice = detector::user_plane_slice(c);
  Rng rng(66);
  const int n = 10000;
  int rejected = 0;
  double worst_r2 = 0.0;
  for (int i = 0; i < n; ++i) {
    linkmodel::ScenarioSpec s;
    s.clutter_sigma_db = 0.5;
    s.interferers.push_back(
        {slice.first + static_cast<int>(rng.below(slice.size())), 15.0});
    const auto rec = linkmodel::synth_record(c, b, s, rng.next_u64());
    const auto r = detector::detect_record(rec, c, params);
    worst_r2 = std::max(worst_r2, r.fit.r_squared);
    rejected += (!r.detected && r.fit.r_squared <= 0.8) ? 1 : 0;
  }
  const double frac = static_cast<double>(rejected) / n;
  return {frac >= 0.99, fmt("%.4f of %d trials rejected with R^2 <= 0.8 (max R^2 %.3f)",
                            frac, n, worst_r2)};
}

// 7. Detection runtime grows linearly with N_PRB.
Outcome linear_runtime() {
  const auto t0 = Clock::now();
  bench::BenchOptions o;  // {25, 50, 100, 200, 400}, 500 repetitions
  const auto r = bench::run_bench(o);
  const auto ratios = r.doubling_ratios();
  bool in_band = ratios.size() == 4;
  std::string list;
  for (double q : ratios) {
    in_band = in_band && q >= 1.0 && q <= 3.0;
    list += fmt("%s%.2f", list.empty() ? "" : ",", q);
  }
  const double secs = seconds_since(t0);
  const bool ok = r.fit_r2 > 0.9 && in_band && secs < 60.0;
  return {ok, fmt("fit R^2 %.4f, %.2f ns/PRB, doubling ratios [%s], %.1f s", r.fit_r2,
                  r.fit_slope_ns_per_prb, list.c_str(), secs)};
}

// 8. Internal sources unbalance the branches; external ones do not.
Outcome source_classification() {
  spectrum::CarrierConfig c;
  linkmodel::LinkBudget b;
  Rng rng(88);
  int total = 0;
  int correct = 0;
  for (int i = 0; i < 500; ++i) {
    linkmodel::ScenarioSpec s;
    s.im_present = true;
    s.clutter_sigma_db = 0.0;
    s.slope_db_per_prb = rng.uniform(0.05, 0.3);
    s.im_offset_db = rng.uniform(3.0, 10.0);
    s.branch_count = 2 + static_cast<int>(rng.below(3));
    s.internal_source = i % 2 == 0;
    const auto rec = linkmodel::synth_record(c, b, s, rng.next_u64());
    const auto r = detector::detect_record(rec, c, detector::DetectorParams{});
    const auto want = s.internal_source ? detector::SourceClass::internal
                                        : detector::SourceClass::external;
    ++total;
    correct += (r.detected && r.source == want) ? 1 : 0;
  }
  return {correct == total, fmt("%d / %d records attributed correctly", correct, total)};
}

// 9. Generation is byte-stable and the CSV round-trip is lossless.
Outcome determinism_round_trip() {
  const linkmodel::DatasetSpec spec;
  auto text = [&](std::uint64_t seed) {
    const auto m = linkmodel::synth_dataset(spec, seed);
    std::ostringstream os;
    io::write_measurements_csv(os, m);
    io::write_labels_csv(os, m);
    return os.str();
  };
  const bool stable = text(9) == text(9);

  const auto m = linkmodel::synth_dataset(spec, 9);
  std::ostringstream os;
  io::write_measurements_csv(os, m);
  std::istringstream is(os.str());
  io::ReadReport rep;
  const auto back = io::read_measurements_csv(is, m.carrier, rep);
  double worst = back.size() == m.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(m.size(), back.size()); ++i) {
    const auto& a = m.records[i];
    const auto& c = back.records[i];
    if (a.rip_dbm.size() != c.rip_dbm.size() ||
        a.rtp_dbm_per_branch.size() != c.rtp_dbm_per_branch.size()) {
      worst = INFINITY;
      break;
    }
    for (std::size_t k = 0; k < a.rip_dbm.size(); ++k)
      worst = std::max(worst, std::abs(a.rip_dbm[k] - c.rip_dbm[k]));
    for (std::size_t k = 0; k < a.rtp_dbm_per_branch.size(); ++k)
      worst = std::max(worst, std::abs(a.rtp_dbm_per_branch[k] - c.rtp_dbm_per_branch[k]));
  }
  return {stable && worst <= 1e-6,
          fmt("byte-identical=%s, worst round-trip error %.3g dB", stable ? "yes" : "no", worst)};
}

}  // namespace

int main() {
  detector::DetectorParams best;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "bandwidth law of convolved pulses", bandwidth_law},
      {2, "sloped RIP bound closed form", bound_slope},
      {3, "OLS matches normal equations", ols_oracle},
      {4, "perfect ROC on the default dataset", [&] { return default_dataset_tuning(best); }},
      {5, "false-positive rate on flat floors", [&] { return false_positive_bound(best); }},
      {6, "narrowband spike rejection", [&] { return narrowband_rejection(best); }},
      {7, "linear runtime in N_PRB", linear_runtime},
      {8, "internal/external source attribution", source_classification},
      {9, "determinism and CSV round-trip", determinism_round_trip},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
