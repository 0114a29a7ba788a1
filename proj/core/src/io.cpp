#include "imdet/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "imdet/error.hpp"

namespace imdet::io {

using json = nlohmann::json;
using linkmodel::LinkBudget;
using linkmodel::MeasurementRecord;
using linkmodel::Source;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void check_identifier(const std::string& id) {
  if (id.empty() || id.find_first_of(",\"\n\r") != std::string::npos)
    throw InvalidInput("bs_id \"" + id + "\" cannot be written to CSV");
}

std::size_t max_branches(const RipMatrix& m) {
  std::size_t k = 0;
  for (const auto& r : m.records) k = std::max(k, r.rtp_dbm_per_branch.size());
  return k;
}

std::vector<std::string> measurement_header(std::size_t branches,
                                            std::size_t prbs) {
  std::vector<std::string> cols{"bs_id", "timestamp", "branch_count"};
  for (std::size_t b = 0; b < branches; ++b)
    cols.push_back("rtp_dbm_branch_" + std::to_string(b));
  for (std::size_t u = 0; u < prbs; ++u)
    cols.push_back("rip_dbm_prb_" + std::to_string(u));
  return cols;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

void write_measurements_csv(std::ostream& out, const RipMatrix& matrix) {
  const std::size_t branches = std::max<std::size_t>(1, max_branches(matrix));
  const auto prbs = static_cast<std::size_t>(matrix.carrier.n_prb_user());
  write_row(out, measurement_header(branches, prbs));
  std::vector<std::string> cells;
  for (const auto& r : matrix.records) {
    check_identifier(r.bs_id);
    if (r.rip_dbm.size() != prbs)
      throw InvalidInput("record " + r.bs_id + " has the wrong RIP length");
    cells.clear();
    cells.push_back(r.bs_id);
    cells.push_back(format_timestamp(r.timestamp));
    cells.push_back(std::to_string(r.rtp_dbm_per_branch.size()));
    for (std::size_t b = 0; b < branches; ++b)
      cells.push_back(b < r.rtp_dbm_per_branch.size()
                          ? format_double(r.rtp_dbm_per_branch[b])
                          : std::string{});
    for (double v : r.rip_dbm) cells.push_back(format_double(v));
    write_row(out, cells);
  }
}

void write_labels_csv(std::ostream& out, const RipMatrix& matrix) {
  out << "bs_id,timestamp,im_present,source\n";
  for (const auto& r : matrix.records) {
    check_identifier(r.bs_id);
    if (!r.label_im_present) continue;
    out << r.bs_id << ',' << format_timestamp(r.timestamp) << ','
        << (*r.label_im_present ? 1 : 0) << ','
        << linkmodel::to_string(r.label_source.value_or(Source::none)) << '\n';
  }
}

RipMatrix read_measurements_csv(std::istream& in,
                                const std::optional<CarrierConfig>& carrier,
                                ReadReport& report) {
  report = {};
  std::string line;
  if (!next_line(in, line)) throw SchemaError("header", "missing header row");
  const auto header = split_csv(line);

  const std::vector<std::string> fixed{"bs_id", "timestamp", "branch_count"};
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (i >= header.size() || header[i] != fixed[i])
      throw SchemaError(fixed[i], "column " + std::to_string(i + 1) +
                                      " must be \"" + fixed[i] + "\"");
  }
  std::size_t branches = 0;
  while (fixed.size() + branches < header.size() &&
         header[fixed.size() + branches].starts_with("rtp_dbm_branch_"))
    ++branches;
  const std::size_t prbs = header.size() - fixed.size() - branches;
  if (branches == 0)
    throw SchemaError("rtp_dbm_branch_0", "no rtp_dbm_branch_* columns");
  if (prbs == 0) throw SchemaError("rip_dbm_prb_0", "no rip_dbm_prb_* columns");

  RipMatrix matrix;
  if (carrier) {
    matrix.carrier = *carrier;
  } else {
    matrix.carrier.n_prb = static_cast<int>(prbs);
    matrix.carrier.n_prb_control = 0;
  }
  matrix.carrier.validate();
  const auto expected_prbs = static_cast<std::size_t>(matrix.carrier.n_prb_user());

  const auto expected = measurement_header(branches, expected_prbs);
  for (std::size_t i = 0; i < std::max(expected.size(), header.size()); ++i) {
    if (i >= header.size())
      throw SchemaError(expected[i], "missing column \"" + expected[i] + "\"");
    if (i >= expected.size())
      throw SchemaError(std::string(header[i]),
                        "unexpected column \"" + std::string(header[i]) +
                            "\" (carrier has " + std::to_string(expected_prbs) +
                            " user-plane PRBs)");
    if (header[i] != expected[i])
      throw SchemaError(expected[i], "column " + std::to_string(i + 1) +
                                         " is \"" + std::string(header[i]) +
                                         "\", expected \"" + expected[i] + "\"");
  }

  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ++report.rows;
    const auto cells = split_csv(line);
    auto reject = [&](const std::string& why) {
      ++report.malformed;
      report.diagnostics.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (cells.size() != expected.size()) {
      reject("expected " + std::to_string(expected.size()) + " fields, got " +
             std::to_string(cells.size()));
      continue;
    }
    MeasurementRecord rec;
    rec.bs_id = std::string(cells[0]);
    if (rec.bs_id.empty()) {
      reject("empty bs_id");
      continue;
    }
    try {
      rec.timestamp = parse_timestamp(cells[1]);
    } catch (const InvalidInput& e) {
      reject(e.what());
      continue;
    }
    std::size_t k = 0;
    auto [p, ec] = std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), k);
    if (ec != std::errc{} || p != cells[2].data() + cells[2].size() || k < 1 ||
        k > branches) {
      reject("bad branch_count \"" + std::string(cells[2]) + "\"");
      continue;
    }
    bool ok = true;
    for (std::size_t b = 0; b < branches && ok; ++b) {
      const auto cell = cells[3 + b];
      if (b >= k) {
        if (!cell.empty()) {
          reject("rtp_dbm_branch_" + std::to_string(b) + " set beyond branch_count");
          ok = false;
        }
        continue;
      }
      const auto v = parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        reject("bad rtp_dbm_branch_" + std::to_string(b) + " \"" +
               std::string(cell) + "\"");
        ok = false;
      } else {
        rec.rtp_dbm_per_branch.push_back(*v);
      }
    }
    for (std::size_t u = 0; u < expected_prbs && ok; ++u) {
      const auto cell = cells[3 + branches + u];
      const auto v = parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        reject("bad rip_dbm_prb_" + std::to_string(u) + " \"" + std::string(cell) + "\"");
        ok = false;
      } else {
        rec.rip_dbm.push_back(*v);
      }
    }
    if (ok) matrix.records.push_back(std::move(rec));
  }

  // Abort when more than 1% of rows are malformed.
  if (report.malformed * 100 > report.rows)
    throw SchemaError("rows", std::to_string(report.malformed) + " of " +
                                  std::to_string(report.rows) +
                                  " rows are malformed");
  matrix.validate();
  return matrix;
}

void read_labels_csv(std::istream& in, RipMatrix& matrix) {
  std::string line;
  if (!next_line(in, line)) throw SchemaError("header", "missing header row");
  const auto header = split_csv(line);
  const std::vector<std::string> expected{"bs_id", "timestamp", "im_present", "source"};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= header.size() || header[i] != expected[i])
      throw SchemaError(expected[i], "labels column " + std::to_string(i + 1) +
                                         " must be \"" + expected[i] + "\"");
  }
  if (header.size() != expected.size())
    throw SchemaError(std::string(header[expected.size()]),
                      "unexpected labels column \"" +
                          std::string(header[expected.size()]) + "\"");

  std::map<std::pair<std::string, Timestamp>, std::pair<bool, Source>> labels;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    const std::string where = "labels line " + std::to_string(line_no);
    if (cells.size() != expected.size())
      throw SchemaError("rows", where + ": expected 4 fields");
    if (cells[2] != "0" && cells[2] != "1")
      throw SchemaError("im_present", where + ": im_present must be 0 or 1");
    Timestamp ts;
    try {
      ts = parse_timestamp(cells[1]);
    } catch (const InvalidInput& e) {
      throw SchemaError("timestamp", where + ": " + e.what());
    }
    Source src;
    try {
      src = linkmodel::source_from_string(cells[3]);
    } catch (const InvalidInput& e) {
      throw SchemaError("source", where + ": " + e.what());
    }
    labels[{std::string(cells[0]), ts}] = {cells[2] == "1", src};
  }

  for (auto& r : matrix.records) {
    const auto it = labels.find({r.bs_id, r.timestamp});
    if (it == labels.end())
      throw SchemaError("rows", "no label for " + r.bs_id + " at " +
                                    format_timestamp(r.timestamp));
    r.label_im_present = it->second.first;
    r.label_source = it->second.second;
  }
}

namespace {

/// Reads one JSON object, rejecting unknown keys on finish().
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SchemaError(path_, path_ + " must be an object");
  }

  const json* find(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw type_error(key, "a number");
      out = v->get<double>();
    }
  }

  /// Number, or null for negative infinity.
  void power(const char* key, double& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out = -std::numeric_limits<double>::infinity();
      } else {
        if (!v->is_number()) throw type_error(key, "a number or null");
        out = v->get<double>();
      }
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw type_error(key, "an integer");
      out = v->get<int>();
    }
  }

  void u64(const char* key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) throw type_error(key, "a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void string(const char* key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw type_error(key, "a string");
      out = v->get<std::string>();
    }
  }

  std::string field(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) {
        const std::string f = path_.empty() ? key : path_ + "." + key;
        throw SchemaError(f, "unknown field \"" + f + "\"");
      }
    }
  }

 private:
  SchemaError type_error(const char* key, const char* what) const {
    return SchemaError(field(key), "field \"" + field(key) + "\" must be " + what);
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

json power_json(double dbm) {
  return std::isinf(dbm) && dbm < 0 ? json(nullptr) : json(dbm);
}

json carrier_json(const CarrierConfig& c) {
  return {{"center_freq_hz", c.center_freq_hz},
          {"bandwidth_hz", c.bandwidth_hz},
          {"subcarrier_spacing_hz", c.subcarrier_spacing_hz},
          {"n_prb", c.n_prb},
          {"n_sc_per_prb", c.n_sc_per_prb},
          {"n_prb_control", c.n_prb_control},
          {"direction", std::string(spectrum::to_string(c.direction))}};
}

void read_carrier(const json& j, CarrierConfig& c) {
  ObjectReader r(j, "carrier");
  r.number("center_freq_hz", c.center_freq_hz);
  r.number("bandwidth_hz", c.bandwidth_hz);
  r.number("subcarrier_spacing_hz", c.subcarrier_spacing_hz);
  r.integer("n_prb", c.n_prb);
  r.integer("n_sc_per_prb", c.n_sc_per_prb);
  r.integer("n_prb_control", c.n_prb_control);
  std::string dir(spectrum::to_string(c.direction));
  r.string("direction", dir);
  try {
    c.direction = spectrum::direction_from_string(dir);
  } catch (const InvalidInput& e) {
    throw SchemaError("carrier.direction", e.what());
  }
  r.finish();
}

json budget_json(const LinkBudget& b) {
  return {{"p_bs_dbm", b.p_bs_dbm},
          {"path_loss_db", b.path_loss_db},
          {"n0_dbm_hz", b.n0_dbm_hz},
          {"p_other_interf_dbm", power_json(b.p_other_interf_dbm)}};
}

void read_budget(const json& j, LinkBudget& b) {
  ObjectReader r(j, "budget");
  r.number("p_bs_dbm", b.p_bs_dbm);
  r.number("path_loss_db", b.path_loss_db);
  r.number("n0_dbm_hz", b.n0_dbm_hz);
  r.power("p_other_interf_dbm", b.p_other_interf_dbm);
  r.finish();
}

json dataset_json(const DatasetSpec& d) {
  return {{"record_count", d.record_count},
          {"positive_count", d.positive_count},
          {"low_rtp_count", d.low_rtp_count},
          {"low_rtp_threshold_dbm", d.low_rtp_threshold_dbm},
          {"low_rtp_floor_offset_db", d.low_rtp_floor_offset_db},
          {"branch_count", d.branch_count},
          {"bs_count", d.bs_count},
          {"clutter_sigma_db", d.clutter_sigma_db},
          {"positive_rise_min_db", d.positive_rise_min_db},
          {"positive_rise_max_db", d.positive_rise_max_db},
          {"im_offset_min_db", d.im_offset_min_db},
          {"im_offset_max_db", d.im_offset_max_db},
          {"internal_fraction", d.internal_fraction},
          {"narrowband_prob", d.narrowband_prob},
          {"narrowband_boost_min_db", d.narrowband_boost_min_db},
          {"narrowband_boost_max_db", d.narrowband_boost_max_db},
          {"occupancy_prob", d.occupancy_prob},
          {"occupancy_boost_db", d.occupancy_boost_db},
          {"start", format_timestamp(d.start)}};
}

void read_dataset(const json& j, DatasetSpec& d) {
  ObjectReader r(j, "dataset");
  r.integer("record_count", d.record_count);
  r.integer("positive_count", d.positive_count);
  r.integer("low_rtp_count", d.low_rtp_count);
  r.number("low_rtp_threshold_dbm", d.low_rtp_threshold_dbm);
  r.number("low_rtp_floor_offset_db", d.low_rtp_floor_offset_db);
  r.integer("branch_count", d.branch_count);
  r.integer("bs_count", d.bs_count);
  r.number("clutter_sigma_db", d.clutter_sigma_db);
  r.number("positive_rise_min_db", d.positive_rise_min_db);
  r.number("positive_rise_max_db", d.positive_rise_max_db);
  r.number("im_offset_min_db", d.im_offset_min_db);
  r.number("im_offset_max_db", d.im_offset_max_db);
  r.number("internal_fraction", d.internal_fraction);
  r.number("narrowband_prob", d.narrowband_prob);
  r.number("narrowband_boost_min_db", d.narrowband_boost_min_db);
  r.number("narrowband_boost_max_db", d.narrowband_boost_max_db);
  r.number("occupancy_prob", d.occupancy_prob);
  r.number("occupancy_boost_db", d.occupancy_boost_db);
  std::string start = format_timestamp(d.start);
  r.string("start", start);
  try {
    d.start = parse_timestamp(start);
  } catch (const InvalidInput& e) {
    throw SchemaError("dataset.start", e.what());
  }
  r.finish();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string sidecar_to_json(const Sidecar& s) {
  const json j = {{"schema", std::string(kSidecarSchema)},
                  {"seed", s.seed},
                  {"carrier", carrier_json(s.spec.carrier)},
                  {"budget", budget_json(s.spec.budget)},
                  {"dataset", dataset_json(s.spec)}};
  return j.dump(2) + "\n";
}

Sidecar sidecar_from_json(std::string_view text) {
  const json j = parse_json(text);
  Sidecar s;
  ObjectReader r(j, "");
  std::string schema(kSidecarSchema);
  r.string("schema", schema);
  if (schema != kSidecarSchema)
    throw SchemaError("schema", "unsupported schema \"" + schema + "\"");
  r.u64("seed", s.seed);
  if (const json* c = r.find("carrier")) read_carrier(*c, s.spec.carrier);
  if (const json* b = r.find("budget")) read_budget(*b, s.spec.budget);
  if (const json* d = r.find("dataset")) read_dataset(*d, s.spec);
  r.finish();
  // Validation messages lead with the offending field name.
  auto check = [](const std::string& section, auto&& validate) {
    try {
      validate();
    } catch (const InvalidInput& e) {
      const std::string msg = e.what();
      const auto end = msg.find_first_not_of("abcdefghijklmnopqrstuvwxyz_0123456789");
      throw SchemaError(section + "." + msg.substr(0, end), msg);
    }
  };
  check("carrier", [&] { s.spec.carrier.validate(); });
  check("budget", [&] { s.spec.budget.validate(); });
  check("dataset", [&] { s.spec.validate(); });
  return s;
}

void write_results_csv(std::ostream& out, const RipMatrix& matrix,
                       std::span<const DetectionResult> results) {
  if (results.size() != matrix.records.size())
    throw InvalidInput("one result per record is required");
  out << "bs_id,timestamp,detected,r_squared,slope,case,source\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& rec = matrix.records[i];
    out << rec.bs_id << ',' << format_timestamp(rec.timestamp) << ','
        << (r.detected ? 1 : 0) << ',' << format_double(r.fit.r_squared) << ','
        << format_double(r.fit.slope) << ',' << detector::to_string(r.fit_case)
        << ',' << detector::to_string(r.source) << '\n';
  }
}

void write_results_jsonl(std::ostream& out, const RipMatrix& matrix,
                         std::span<const DetectionResult> results) {
  if (results.size() != matrix.records.size())
    throw InvalidInput("one result per record is required");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& rec = matrix.records[i];
    const json j = {{"bs_id", rec.bs_id},
                    {"timestamp", format_timestamp(rec.timestamp)},
                    {"detected", r.detected},
                    {"r_squared", r.fit.r_squared},
                    {"slope", r.fit.slope},
                    {"intercept", r.fit.intercept},
                    {"case", std::string(detector::to_string(r.fit_case))},
                    {"source", std::string(detector::to_string(r.source))},
                    {"prefiltered", r.prefiltered}};
    out << j.dump() << '\n';
  }
}

namespace {

json slope_json(double eps_slope) {
  return std::isinf(eps_slope) ? json(nullptr) : json(eps_slope);
}

json confusion_json(const tuner::ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

json points_json(const std::vector<tuner::RocPoint>& pts, bool with_linear) {
  json arr = json::array();
  for (const auto& p : pts) {
    json o = {{"eps_slope", slope_json(p.params.eps_slope)},
              {"fpr", p.fpr},
              {"tpr", p.tpr},
              {"sentinel", p.sentinel}};
    if (with_linear) o["eps_linear"] = p.params.eps_linear;
    arr.push_back(std::move(o));
  }
  return arr;
}

const json& require(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end())
    throw SchemaError(path + key, "report is missing \"" + path + key + "\"");
  return *it;
}

}  // namespace

std::string report_to_json(const TuningReport& report) {
  json curves = json::array();
  for (const auto& c : report.roc_curves)
    curves.push_back({{"eps_linear", c.eps_linear},
                      {"auc", c.auc},
                      {"points", points_json(c.points, false)}});
  json auc_map = json::object();
  for (const auto& c : report.roc_curves)
    auc_map[format_double(c.eps_linear)] = c.auc;
  const json j = {
      {"schema", std::string(kReportSchema)},
      {"eps_linear_grid", report.eps_linear_grid},
      {"eps_slope_grid", report.eps_slope_grid},
      {"best_params",
       {{"eps_linear", report.best_params.eps_linear},
        {"eps_slope", report.best_params.eps_slope}}},
      {"best_auc", report.best_auc},
      {"auc_per_eps_linear", auc_map},
      {"confusion_at_best", confusion_json(report.confusion_at_best)},
      {"rtp_partition_dbm", report.rtp_partition_dbm},
      {"confusion_above_rtp", confusion_json(report.confusion_above_rtp)},
      {"roc_curves", curves},
      {"pooled",
       {{"auc", report.pooled.auc}, {"points", points_json(report.pooled.points, true)}}}};
  return j.dump(2) + "\n";
}

DetectorParams params_from_report_json(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw SchemaError("", "report must be a JSON object");
  const auto& best = require(j, "best_params", "");
  DetectorParams p;
  const auto& lin = require(best, "eps_linear", "best_params.");
  const auto& slope = require(best, "eps_slope", "best_params.");
  if (!lin.is_number()) throw SchemaError("best_params.eps_linear", "must be a number");
  if (!slope.is_number()) throw SchemaError("best_params.eps_slope", "must be a number");
  p.eps_linear = lin.get<double>();
  p.eps_slope = slope.get<double>();
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    throw SchemaError("best_params", e.what());
  }
  return p;
}

tuner::ConfusionMatrix confusion_from_report_json(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw SchemaError("", "report must be a JSON object");
  const auto& c = require(j, "confusion_at_best", "");
  tuner::ConfusionMatrix cm;
  for (auto [key, dst] : {std::pair{"tp", &cm.tp}, std::pair{"fp", &cm.fp},
                          std::pair{"tn", &cm.tn}, std::pair{"fn", &cm.fn}}) {
    const auto& v = require(c, key, "confusion_at_best.");
    if (!v.is_number_unsigned())
      throw SchemaError(std::string("confusion_at_best.") + key, "must be a count");
    *dst = v.get<std::size_t>();
  }
  return cm;
}

void write_roc_csv(std::ostream& out, const TuningReport& report) {
  out << "eps_linear,eps_slope,fpr,tpr\n";
  for (const auto& c : report.roc_curves)
    for (const auto& p : c.points)
      out << format_double(c.eps_linear) << ',' << format_double(p.params.eps_slope)
          << ',' << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

void write_pooled_roc_csv(std::ostream& out, const TuningReport& report) {
  out << "eps_linear,eps_slope,fpr,tpr\n";
  for (const auto& p : report.pooled.points)
    out << format_double(p.params.eps_linear) << ','
        << format_double(p.params.eps_slope) << ',' << format_double(p.fpr)
        << ',' << format_double(p.tpr) << '\n';
}

void write_roc_csv_from_report_json(std::ostream& out, std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw SchemaError("", "report must be a JSON object");
  const auto& curves = require(j, "roc_curves", "");
  if (!curves.is_array()) throw SchemaError("roc_curves", "must be an array");
  out << "eps_linear,eps_slope,fpr,tpr\n";
  for (const auto& c : curves) {
    const auto& lin = require(c, "eps_linear", "roc_curves[].");
    const auto& pts = require(c, "points", "roc_curves[].");
    if (!lin.is_number() || !pts.is_array())
      throw SchemaError("roc_curves", "malformed ROC curve");
    for (const auto& p : pts) {
      const auto& slope = require(p, "eps_slope", "roc_curves[].points[].");
      const auto& fpr = require(p, "fpr", "roc_curves[].points[].");
      const auto& tpr = require(p, "tpr", "roc_curves[].points[].");
      if (!fpr.is_number() || !tpr.is_number() ||
          !(slope.is_null() || slope.is_number()))
        throw SchemaError("roc_curves", "malformed ROC point");
      const double s = slope.is_null() ? std::numeric_limits<double>::infinity()
                                       : slope.get<double>();
      out << format_double(lin.get<double>()) << ',' << format_double(s) << ','
          << format_double(fpr.get<double>()) << ','
          << format_double(tpr.get<double>()) << '\n';
    }
  }
}

}  // namespace imdet::io
