#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imdet/detector.hpp"
#include "imdet/linkmodel.hpp"
#include "imdet/tuner.hpp"

// Dataset, result and report file formats.
//
// CSV dialect: comma separated, '.' decimal point, mandatory header row,
// UTF-8, LF line endings, no quoting (identifiers may not contain ',', '"'
// or line breaks). Real numbers are written in shortest round-trip form, so
// write -> read is exact.
//
// measurements.csv
//   bs_id,timestamp,branch_count,rtp_dbm_branch_0..rtp_dbm_branch_{K-1},
//   rip_dbm_prb_0..rip_dbm_prb_{U-1}
//   K is the largest branch count in the file; a record with fewer branches
//   leaves the trailing RTP cells empty. U is the user-plane PRB count.
// labels.csv
//   bs_id,timestamp,im_present,source     (im_present: 0/1;
//                                          source: none/internal/external)
// dataset.json (sidecar; also accepted as a generator config)
//   {"schema": "imdet-dataset/1", "seed": u64,
//    "carrier": {...}, "budget": {...}, "dataset": {...}}

namespace imdet::io {

using detector::DetectionResult;
using detector::DetectorParams;
using linkmodel::DatasetSpec;
using linkmodel::RipMatrix;
using spectrum::CarrierConfig;
using tuner::TuningReport;

inline constexpr std::string_view kSidecarSchema = "imdet-dataset/1";
inline constexpr std::string_view kReportSchema = "imdet-tuning-report/1";

/// Shortest round-trip decimal form; infinities as "inf" / "-inf".
std::string format_double(double v);
/// Strict parse of a whole field. Returns nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);

void write_measurements_csv(std::ostream& out, const RipMatrix& matrix);
void write_labels_csv(std::ostream& out, const RipMatrix& matrix);

struct ReadReport {
  std::size_t rows = 0;
  std::size_t malformed = 0;
  /// One line per rejected row, "line N: reason".
  std::vector<std::string> diagnostics;
};

/// Reads measurements. The header is checked column by column and a mismatch
/// throws SchemaError naming the column. Rows that fail to parse are skipped
/// and reported; when more than 1% of rows are malformed the read aborts
/// with SchemaError. `carrier` supplies the PRB layout; when absent, a
/// layout without control PRBs is inferred from the column count.
RipMatrix read_measurements_csv(std::istream& in,
                                const std::optional<CarrierConfig>& carrier,
                                ReadReport& report);

/// Attaches labels keyed by (bs_id, timestamp). Every record must receive a
/// label; otherwise SchemaError.
void read_labels_csv(std::istream& in, RipMatrix& matrix);

struct Sidecar {
  DatasetSpec spec;
  std::uint64_t seed = 0;
};

std::string sidecar_to_json(const Sidecar& sidecar);

/// Parses a generator config or sidecar. Every section and field is optional
/// and falls back to the defaults; unknown fields and wrong types throw
/// SchemaError naming the field path (e.g. "carrier.n_prb").
Sidecar sidecar_from_json(std::string_view text);

void write_results_csv(std::ostream& out, const RipMatrix& matrix,
                       std::span<const DetectionResult> results);
void write_results_jsonl(std::ostream& out, const RipMatrix& matrix,
                         std::span<const DetectionResult> results);

std::string report_to_json(const TuningReport& report);
/// Best parameters stored in a tuning report.
DetectorParams params_from_report_json(std::string_view text);
/// Confusion matrix at the best parameters stored in a tuning report.
tuner::ConfusionMatrix confusion_from_report_json(std::string_view text);

/// eps_linear,eps_slope,fpr,tpr for every point of every per-eps_linear
/// curve, anchors included.
void write_roc_csv(std::ostream& out, const TuningReport& report);
/// Same columns for the pooled curve.
void write_pooled_roc_csv(std::ostream& out, const TuningReport& report);
/// write_roc_csv() output rebuilt from a serialized report.
void write_roc_csv_from_report_json(std::ostream& out, std::string_view text);

}  // namespace imdet::io
