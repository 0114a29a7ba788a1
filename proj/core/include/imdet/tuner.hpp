#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "imdet/detector.hpp"

namespace imdet::tuner {

using detector::DetectionResult;
using detector::DetectorParams;
using linkmodel::RipMatrix;

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  DetectorParams params;
  /// Curve anchors and the eps_slope = 0 / +inf sweep extremes.
  bool sentinel = false;
};

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  std::size_t positives() const { return tp + fn; }
  std::size_t negatives() const { return tn + fp; }
  double tpr() const;
  double fpr() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// One ROC curve: eps_linear fixed, eps_slope swept.
struct RocCurve {
  double eps_linear = 0.0;
  std::vector<RocPoint> points;
  double auc = 0.0;
};

struct TuningReport {
  std::vector<double> eps_linear_grid;
  std::vector<double> eps_slope_grid;
  std::vector<RocCurve> roc_curves;
  /// Every grid cell on one curve, plus anchors.
  RocCurve pooled;
  DetectorParams best_params;
  double best_auc = 0.0;
  ConfusionMatrix confusion_at_best;
  /// Confusion at best_params restricted to records whose mean RTP exceeds
  /// rtp_partition_dbm.
  double rtp_partition_dbm = -104.0;
  ConfusionMatrix confusion_above_rtp;

  /// AUC of the curve for `eps_linear`, if it was searched.
  std::optional<double> auc_for(double eps_linear) const;
};

inline const std::vector<double> kDefaultEpsLinearGrid{0.95, 0.9, 0.85, 0.8};
inline const std::vector<double> kDefaultEpsSlopeGrid{1.03, 1.05, 1.07, 1.09,
                                                    1.11};

ConfusionMatrix confusion(std::span<const DetectionResult> results,
                          const std::vector<bool>& labels);

/// Ground-truth labels of every record; throws InvalidInput when any record
/// is unlabeled.
std::vector<bool> labels_of(const RipMatrix& matrix);

/// Trapezoidal area under the points after sorting by (fpr, tpr).
double auc(std::span<const RocPoint> points);

/// Exhaustive grid search.
///
/// For each eps_linear the eps_slope grid is swept together with the
/// extremes 0 and +inf, and the curve is anchored at (0, 0) and (1, 1). The
/// chosen eps_linear has the largest AUC (ties go to the larger eps_linear);
/// the chosen eps_slope maximizes TPR - FPR on that curve (ties go to the
/// larger eps_slope). Throws DegenerateLabels when a class is empty.
TuningReport roc_grid(const RipMatrix& matrix, const std::vector<bool>& labels,
                      std::span<const double> eps_linear_grid,
                      std::span<const double> eps_slope_grid,
                      double rtp_partition_dbm = -104.0);

}  // namespace imdet::tuner
