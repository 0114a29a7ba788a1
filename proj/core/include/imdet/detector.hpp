#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "imdet/linkmodel.hpp"

namespace imdet::detector {

using linkmodel::MeasurementRecord;
using linkmodel::RipMatrix;
using spectrum::CarrierConfig;

/// Thresholds for the regression test.
///
/// The regression feature is the user-plane PRB position min-max normalized
/// to [0, 1], so `eps_slope` is the total RIP rise in dB across the
/// user-plane span. A fit against raw PRB indices has the same R^2 and a
/// slope smaller by a factor (N_PRB^(u) - 1).
struct DetectorParams {
  double eps_linear = 0.95;
  double eps_slope = 1.11;
  /// When set, records whose mean RTP is at or below this level are reported
  /// as not detected without being tested.
  std::optional<double> rtp_prefilter_dbm;
  /// Branch RTP spread above which a detection is attributed to an internal
  /// source.
  double internal_gap_db = 3.0;

  static constexpr bool normalize_features = true;
  static constexpr bool fit_intercept = true;

  void validate() const;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

enum class FitCase { poor_fit, flat, sloped };
enum class SourceClass { internal, external, not_applicable };

std::string_view to_string(FitCase c);
std::string_view to_string(SourceClass s);
FitCase fit_case_from_string(std::string_view s);
SourceClass source_class_from_string(std::string_view s);

struct DetectionResult {
  bool detected = false;
  RegressionFit fit;
  FitCase fit_case = FitCase::poor_fit;
  SourceClass source = SourceClass::not_applicable;
  bool prefiltered = false;
};

/// Inclusive PRB index range.
struct IndexRange {
  int first = 0;
  int last = -1;
  int size() const { return last - first + 1; }
};

/// User-plane PRBs: N_c/2 <= i <= N_PRB - N_c/2 - 1.
IndexRange user_plane_slice(const CarrierConfig& carrier);

/// Ordinary least squares with intercept, computed from centered sums.
/// A constant `y` yields slope 0 and R^2 0.
RegressionFit ols_fit(std::span<const double> x, std::span<const double> y);

/// Threshold decision and case taxonomy for an existing fit. Both
/// inequalities are strict.
FitCase classify(const RegressionFit& fit, const DetectorParams& params);

/// Regression of the record's RIP against normalized user-plane position.
RegressionFit fit_record(const MeasurementRecord& record,
                         const CarrierConfig& carrier);

DetectionResult detect_record(const MeasurementRecord& record,
                              const CarrierConfig& carrier,
                              const DetectorParams& params);

std::vector<DetectionResult> detect_matrix(const RipMatrix& matrix,
                                           const DetectorParams& params);

}  // namespace imdet::detector
