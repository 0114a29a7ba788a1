#include "imdet/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "imdet/bench.hpp"
#include "imdet/detector.hpp"
#include "imdet/error.hpp"
#include "imdet/io.hpp"
#include "imdet/linkmodel.hpp"
#include "imdet/timestamp.hpp"
#include "imdet/tuner.hpp"

namespace imdet::cli {
namespace {

namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void close_checked(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

fs::path sibling_with_suffix(const fs::path& path, const std::string& suffix,
                             const std::string& ext) {
  auto p = path;
  p.replace_filename(path.stem().string() + suffix + ext);
  return p;
}

std::optional<spectrum::CarrierConfig> discover_carrier(
    const fs::path& data, const std::string& sidecar_flag) {
  fs::path sidecar = sidecar_flag;
  if (sidecar.empty()) {
    sidecar = data.parent_path() / "dataset.json";
    if (!fs::exists(sidecar)) return std::nullopt;
  }
  return io::sidecar_from_json(read_file(sidecar)).spec.carrier;
}

linkmodel::RipMatrix load_measurements(const fs::path& data,
                                       const std::string& sidecar_flag,
                                       std::ostream& err) {
  const auto carrier = discover_carrier(data, sidecar_flag);
  auto in = open_in(data);
  io::ReadReport report;
  auto matrix = io::read_measurements_csv(in, carrier, report);
  for (const auto& d : report.diagnostics) err << data.string() << ": " << d << '\n';
  return matrix;
}

void print_confusion(std::ostream& out, const tuner::ConfusionMatrix& cm) {
  out << "confusion matrix (rows: label, columns: predicted)\n"
      << "              detected  not-detected\n"
      << "  im-present  " << cm.tp << "  " << cm.fn << '\n'
      << "  im-absent   " << cm.fp << "  " << cm.tn << '\n';
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  io::Sidecar sidecar;
  sidecar.seed = 1;
  if (!a.config.empty()) sidecar = io::sidecar_from_json(read_file(a.config));
  if (a.seed) sidecar.seed = *a.seed;
  if (const char* env = std::getenv("IMDET_SEED")) {
    const std::string_view text = env;
    std::uint64_t s = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), s);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
      throw UsageError(std::string("IMDET_SEED is not an unsigned integer: ") + env);
    sidecar.seed = s;
  }

  const auto matrix = linkmodel::synth_dataset(sidecar.spec, sidecar.seed);

  const fs::path dir = a.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  {
    const auto path = dir / "measurements.csv";
    auto f = open_out(path);
    io::write_measurements_csv(f, matrix);
    close_checked(f, path);
  }
  {
    const auto path = dir / "labels.csv";
    auto f = open_out(path);
    io::write_labels_csv(f, matrix);
    close_checked(f, path);
  }
  {
    const auto path = dir / "dataset.json";
    auto f = open_out(path);
    f << io::sidecar_to_json(sidecar);
    close_checked(f, path);
  }

  std::size_t positives = 0;
  std::size_t low_rtp = 0;
  for (const auto& r : matrix.records) {
    positives += r.label_im_present.value_or(false) ? 1 : 0;
    low_rtp += linkmodel::mean_rtp(r) <= sidecar.spec.low_rtp_threshold_dbm ? 1 : 0;
  }
  out << "generated " << matrix.size() << " records (seed " << sidecar.seed
      << "): " << positives << " positive, " << matrix.size() - positives
      << " negative, " << low_rtp << " with mean RTP <= "
      << io::format_double(sidecar.spec.low_rtp_threshold_dbm) << " dBm\n"
      << "wrote " << (dir / "measurements.csv").string() << ", "
      << (dir / "labels.csv").string() << ", " << (dir / "dataset.json").string()
      << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ detect

struct DetectArgs {
  std::string data;
  std::string labels;
  std::string sidecar;
  std::string report;
  std::optional<double> eps_linear;
  std::optional<double> eps_slope;
  std::optional<double> prefilter;
  std::string out;
};

int cmd_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  detector::DetectorParams params;
  if (!a.report.empty()) {
    if (a.eps_linear || a.eps_slope)
      throw UsageError("--report cannot be combined with --eps-linear/--eps-slope");
    params = io::params_from_report_json(read_file(a.report));
  } else {
    if (!a.eps_linear || !a.eps_slope)
      throw UsageError("give --eps-linear and --eps-slope, or --report");
    params.eps_linear = *a.eps_linear;
    params.eps_slope = *a.eps_slope;
  }
  params.rtp_prefilter_dbm = a.prefilter;
  try {
    params.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }

  const fs::path data = a.data;
  auto matrix = load_measurements(data, a.sidecar, err);

  fs::path labels = a.labels;
  if (labels.empty() && fs::exists(data.parent_path() / "labels.csv"))
    labels = data.parent_path() / "labels.csv";
  const bool have_labels = !labels.empty();
  if (have_labels) {
    auto in = open_in(labels);
    io::read_labels_csv(in, matrix);
  }

  const auto results = detector::detect_matrix(matrix, params);

  const fs::path out_csv = a.out;
  {
    auto f = open_out(out_csv);
    io::write_results_csv(f, matrix, results);
    close_checked(f, out_csv);
  }
  const auto out_jsonl = fs::path(out_csv).replace_extension(".jsonl");
  {
    auto f = open_out(out_jsonl);
    io::write_results_jsonl(f, matrix, results);
    close_checked(f, out_jsonl);
  }

  std::size_t detected = 0;
  std::size_t internal = 0;
  for (const auto& r : results) {
    detected += r.detected ? 1 : 0;
    internal += r.source == detector::SourceClass::internal ? 1 : 0;
  }
  out << detected << " detected / " << results.size() << " (" << internal
      << " internal, " << detected - internal << " external)\n"
      << "eps_linear=" << io::format_double(params.eps_linear)
      << " eps_slope=" << io::format_double(params.eps_slope) << '\n';
  if (have_labels && !results.empty())
    print_confusion(out, tuner::confusion(results, tuner::labels_of(matrix)));
  out << "wrote " << out_csv.string() << ", " << out_jsonl.string() << '\n';
  return kExitOk;
}

// -------------------------------------------------------------------- tune

struct TuneArgs {
  std::string data;
  std::string labels;
  std::string sidecar;
  std::vector<double> grid_linear = tuner::kDefaultEpsLinearGrid;
  std::vector<double> grid_slope = tuner::kDefaultEpsSlopeGrid;
  double rtp_partition = -104.0;
  std::string out;
};

int cmd_tune(const TuneArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path data = a.data;
  auto matrix = load_measurements(data, a.sidecar, err);
  {
    auto in = open_in(a.labels);
    io::read_labels_csv(in, matrix);
  }
  try {
    for (double e : a.grid_linear) detector::DetectorParams{e, 1.0}.validate();
    for (double e : a.grid_slope) detector::DetectorParams{0.5, e}.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("bad grid value: ") + e.what());
  }

  const auto report = tuner::roc_grid(matrix, tuner::labels_of(matrix),
                                      a.grid_linear, a.grid_slope, a.rtp_partition);

  const fs::path out_json = a.out;
  {
    auto f = open_out(out_json);
    f << io::report_to_json(report);
    close_checked(f, out_json);
  }
  const auto roc = sibling_with_suffix(out_json, "_roc", ".csv");
  {
    auto f = open_out(roc);
    io::write_roc_csv(f, report);
    close_checked(f, roc);
  }
  const auto pooled = sibling_with_suffix(out_json, "_roc_pooled", ".csv");
  {
    auto f = open_out(pooled);
    io::write_pooled_roc_csv(f, report);
    close_checked(f, pooled);
  }

  for (const auto& c : report.roc_curves)
    out << "eps_linear=" << io::format_double(c.eps_linear)
        << " AUC=" << io::format_double(c.auc) << '\n';
  out << "best eps_linear=" << io::format_double(report.best_params.eps_linear)
      << " eps_slope=" << io::format_double(report.best_params.eps_slope)
      << " AUC=" << io::format_double(report.best_auc) << '\n';
  print_confusion(out, report.confusion_at_best);
  out << "wrote " << out_json.string() << ", " << roc.string() << ", "
      << pooled.string() << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- bench

struct BenchArgs {
  bench::BenchOptions options;
  std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  try {
    a.options.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  const auto result = bench::run_bench(a.options);
  const fs::path path = a.out;
  auto f = open_out(path);
  bench::write_bench_csv(f, result);
  close_checked(f, path);

  const auto norm = result.normalized_runtime();
  out << "n_prb  mean_ns  noop_ns  normalized\n";
  for (std::size_t i = 0; i < result.n_prb_values.size(); ++i)
    out << result.n_prb_values[i] << "  " << result.mean_runtime_ns[i] << "  "
        << result.noop_runtime_ns[i] << "  " << norm[i] << '\n';
  out << "linear fit: " << result.fit_slope_ns_per_prb << " ns/PRB + "
      << result.fit_intercept_ns << " ns, R^2=" << result.fit_r2 << '\n';
  out << "doubling ratios:";
  for (double r : result.doubling_ratios()) out << ' ' << r;
  out << "\nwrote " << path.string() << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- plot-data

struct PlotArgs {
  std::string kind;
  std::string data;
  std::string labels;
  std::string sidecar;
  std::string report;
  std::string bench;
  std::string out;
};

void require_input(const std::string& value, const char* flag, const std::string& kind) {
  if (value.empty())
    throw UsageError("plot-data --kind " + kind + " requires " + flag);
}

int cmd_plot_data(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path path = a.out;
  std::ostringstream body;

  if (a.kind == "rip_prb") {
    require_input(a.data, "--data", a.kind);
    const fs::path data = a.data;
    auto matrix = load_measurements(data, a.sidecar, err);
    fs::path labels = a.labels;
    if (labels.empty()) labels = data.parent_path() / "labels.csv";
    if (!fs::exists(labels)) throw UsageError("rip_prb needs labels (--labels)");
    {
      auto in = open_in(labels);
      io::read_labels_csv(in, matrix);
    }
    const linkmodel::MeasurementRecord* pos = nullptr;
    const linkmodel::MeasurementRecord* neg = nullptr;
    for (const auto& r : matrix.records) {
      if (!pos && r.label_im_present.value_or(false)) pos = &r;
      if (!neg && !r.label_im_present.value_or(true)) neg = &r;
    }
    if (!pos || !neg)
      throw InvalidInput("dataset needs one positive and one negative record");
    const auto range = detector::user_plane_slice(matrix.carrier);
    body << "prb_index,rip_dbm_positive,rip_dbm_negative\n";
    for (int i = 0; i < range.size(); ++i)
      body << range.first + i << ',' << io::format_double(pos->rip_dbm[i]) << ','
           << io::format_double(neg->rip_dbm[i]) << '\n';
    out << "positive " << pos->bs_id << ' ' << format_timestamp(pos->timestamp)
        << ", negative " << neg->bs_id << ' ' << format_timestamp(neg->timestamp)
        << '\n';
  } else if (a.kind == "roc") {
    require_input(a.report, "--report", a.kind);
    io::write_roc_csv_from_report_json(body, read_file(a.report));
  } else if (a.kind == "confusion") {
    require_input(a.report, "--report", a.kind);
    const auto cm = io::confusion_from_report_json(read_file(a.report));
    body << "label,predicted,count\n"
         << "1,1," << cm.tp << '\n'
         << "1,0," << cm.fn << '\n'
         << "0,1," << cm.fp << '\n'
         << "0,0," << cm.tn << '\n';
  } else if (a.kind == "runtime") {
    require_input(a.bench, "--bench", a.kind);
    body << read_file(a.bench);
  } else {
    throw UsageError("unknown plot kind \"" + a.kind + "\"");
  }

  auto f = open_out(path);
  f << body.str();
  close_checked(f, path);
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intermodulation interference detection toolkit", "imdet"};
  app.require_subcommand(1);

  GenerateArgs gen;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Synthesize a labeled dataset");
  generate->add_option("--config", gen.config, "Generator config (JSON)")
      ->check(CLI::ExistingFile);
  generate->add_option("--out", gen.out_dir, "Output directory")->required();
  auto* seed_opt = generate->add_option("--seed", gen_seed, "RNG seed");

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Run the detector over a dataset");
  detect->add_option("--data", det.data, "measurements.csv")->required();
  detect->add_option("--labels", det.labels, "labels.csv (default: sibling of --data)");
  detect->add_option("--sidecar", det.sidecar, "dataset.json (default: sibling of --data)");
  detect->add_option("--report", det.report, "Tuning report JSON");
  detect->add_option("--eps-linear", det.eps_linear, "R^2 threshold");
  detect->add_option("--eps-slope", det.eps_slope, "Slope threshold, dB per user-plane span");
  detect->add_option("--rtp-prefilter", det.prefilter,
                     "Skip records with mean RTP at or below this level (dBm)");
  detect->add_option("--out", det.out, "Results CSV; JSON lines go next to it")->required();

  TuneArgs tun;
  auto* tune = app.add_subcommand("tune", "Grid-search detector thresholds");
  tune->add_option("--data", tun.data, "measurements.csv")->required();
  tune->add_option("--labels", tun.labels, "labels.csv")->required();
  tune->add_option("--sidecar", tun.sidecar, "dataset.json (default: sibling of --data)");
  tune->add_option("--grid-linear", tun.grid_linear, "eps_linear values")
      ->delimiter(',')
      ->capture_default_str();
  tune->add_option("--grid-slope", tun.grid_slope, "eps_slope values")
      ->delimiter(',')
      ->capture_default_str();
  tune->add_option("--rtp-partition", tun.rtp_partition,
                   "Mean-RTP level for the partitioned confusion matrix (dBm)")
      ->capture_default_str();
  tune->add_option("--out", tun.out, "Report JSON; ROC CSVs go next to it")->required();

  BenchArgs ben;
  auto* benchmark = app.add_subcommand("bench", "Measure detector runtime against N_PRB");
  benchmark->add_option("--prbs", ben.options.n_prb_values, "PRB counts")
      ->delimiter(',')
      ->capture_default_str();
  benchmark->add_option("--reps", ben.options.repetitions, "Timed repetitions")
      ->capture_default_str();
  benchmark->add_option("--warmup", ben.options.warmup, "Discarded repetitions")
      ->capture_default_str();
  benchmark->add_option("--batch", ben.options.batch, "Records per repetition")
      ->capture_default_str();
  benchmark->add_option("--seed", ben.options.seed, "RNG seed")->capture_default_str();
  benchmark->add_option("--out", ben.out, "Output CSV")->required();

  PlotArgs plot;
  auto* plot_data = app.add_subcommand("plot-data", "Export CSV series for plotting");
  plot_data->add_option("--kind", plot.kind, "rip_prb | roc | confusion | runtime")
      ->required()
      ->check(CLI::IsMember({"rip_prb", "roc", "confusion", "runtime"}));
  plot_data->add_option("--data", plot.data, "measurements.csv (rip_prb)");
  plot_data->add_option("--labels", plot.labels, "labels.csv (rip_prb)");
  plot_data->add_option("--sidecar", plot.sidecar, "dataset.json (rip_prb)");
  plot_data->add_option("--report", plot.report, "Tuning report (roc, confusion)");
  plot_data->add_option("--bench", plot.bench, "Bench CSV (runtime)");
  plot_data->add_option("--out", plot.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      if (seed_opt->count() > 0) gen.seed = gen_seed;
      return cmd_generate(gen, out);
    }
    if (detect->parsed()) return cmd_detect(det, out, err);
    if (tune->parsed()) return cmd_tune(tun, out, err);
    if (benchmark->parsed()) return cmd_bench(ben, out);
    if (plot_data->parsed()) return cmd_plot_data(plot, out, err);
  } catch (const UsageError& e) {
    err << "imdet: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "imdet: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "imdet: schema error";
    if (!e.field().empty()) err << " in " << e.field();
    err << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegenerateLabels& e) {
    err << "imdet: degenerate labels: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const InvalidInput& e) {
    err << "imdet: " << e.what() << '\n';
    return kExitAnalysis;
  }
  return kExitUsage;
}

}  // namespace imdet::cli
