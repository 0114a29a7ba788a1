#include "imdet/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imdet/error.hpp"

namespace imdet::tuner {

double ConfusionMatrix::tpr() const {
  return positives() == 0 ? 0.0
                          : static_cast<double>(tp) / static_cast<double>(positives());
}

double ConfusionMatrix::fpr() const {
  return negatives() == 0 ? 0.0
                          : static_cast<double>(fp) / static_cast<double>(negatives());
}

std::optional<double> TuningReport::auc_for(double eps_linear) const {
  for (const auto& c : roc_curves)
    if (c.eps_linear == eps_linear) return c.auc;
  return std::nullopt;
}

ConfusionMatrix confusion(std::span<const DetectionResult> results,
                          const std::vector<bool>& labels) {
  if (results.size() != labels.size())
    throw InvalidInput("results and labels lengths differ: " +
                       std::to_string(results.size()) + " vs " +
                       std::to_string(labels.size()));
  if (labels.empty()) throw InvalidInput("at least one labeled record is required");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = results[i].detected;
    if (labels[i])
      predicted ? ++cm.tp : ++cm.fn;
    else
      predicted ? ++cm.fp : ++cm.tn;
  }
  return cm;
}

std::vector<bool> labels_of(const RipMatrix& matrix) {
  std::vector<bool> labels;
  labels.reserve(matrix.records.size());
  for (std::size_t i = 0; i < matrix.records.size(); ++i) {
    const auto& l = matrix.records[i].label_im_present;
    if (!l) throw InvalidInput("record " + std::to_string(i) + " has no label");
    labels.push_back(*l);
  }
  return labels;
}

double auc(std::span<const RocPoint> points) {
  if (points.size() < 2) throw InvalidInput("AUC needs at least two ROC points");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0))
      throw InvalidInput("ROC rates must lie in [0, 1]");
    pts.emplace_back(p.fpr, p.tpr);
  }
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    area += (pts[i].first - pts[i - 1].first) *
            (pts[i].second + pts[i - 1].second) / 2.0;
  return std::clamp(area, 0.0, 1.0);
}

namespace {

constexpr double kTieTolerance = 1e-12;

RocPoint operating_point(std::span<const detector::RegressionFit> fits,
                         const std::vector<bool>& labels, std::size_t positives,
                         std::size_t negatives, const DetectorParams& params,
                         bool sentinel) {
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (detector::classify(fits[i], params) != detector::FitCase::sloped) continue;
    labels[i] ? ++tp : ++fp;
  }
  RocPoint p;
  p.tpr = static_cast<double>(tp) / static_cast<double>(positives);
  p.fpr = static_cast<double>(fp) / static_cast<double>(negatives);
  p.params = params;
  p.sentinel = sentinel;
  return p;
}

RocPoint anchor(double rate, double eps_linear) {
  RocPoint p;
  p.fpr = rate;
  p.tpr = rate;
  p.params.eps_linear = eps_linear;
  p.params.eps_slope = rate == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  p.sentinel = true;
  return p;
}

}  // namespace

TuningReport roc_grid(const RipMatrix& matrix, const std::vector<bool>& labels,
                      std::span<const double> eps_linear_grid,
                      std::span<const double> eps_slope_grid,
                      double rtp_partition_dbm) {
  if (eps_linear_grid.empty() || eps_slope_grid.empty())
    throw InvalidInput("threshold grids must be non-empty");
  if (labels.size() != matrix.records.size())
    throw InvalidInput("labels must cover every record: " +
                       std::to_string(labels.size()) + " labels for " +
                       std::to_string(matrix.records.size()) + " records");
  for (double e : eps_linear_grid) DetectorParams{e, 1.0}.validate();
  for (double e : eps_slope_grid) DetectorParams{0.5, e}.validate();

  const auto positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0)
    throw DegenerateLabels("ROC needs both positive and negative labels (" +
                           std::to_string(positives) + " positive, " +
                           std::to_string(negatives) + " negative)");

  std::vector<detector::RegressionFit> fits;
  fits.reserve(matrix.records.size());
  for (const auto& r : matrix.records)
    fits.push_back(detector::fit_record(r, matrix.carrier));

  TuningReport report;
  report.eps_linear_grid.assign(eps_linear_grid.begin(), eps_linear_grid.end());
  report.eps_slope_grid.assign(eps_slope_grid.begin(), eps_slope_grid.end());
  report.rtp_partition_dbm = rtp_partition_dbm;
  report.pooled.eps_linear = std::numeric_limits<double>::quiet_NaN();
  report.pooled.points.push_back(anchor(0.0, 1.0));
  report.pooled.points.push_back(anchor(1.0, 1.0));

  for (double eps_linear : eps_linear_grid) {
    RocCurve curve;
    curve.eps_linear = eps_linear;
    curve.points.push_back(anchor(0.0, eps_linear));
    DetectorParams p;
    p.eps_linear = eps_linear;
    p.eps_slope = 0.0;
    curve.points.push_back(operating_point(fits, labels, positives, negatives, p, true));
    for (double eps_slope : eps_slope_grid) {
      p.eps_slope = eps_slope;
      auto pt = operating_point(fits, labels, positives, negatives, p, false);
      curve.points.push_back(pt);
      report.pooled.points.push_back(pt);
    }
    p.eps_slope = std::numeric_limits<double>::infinity();
    curve.points.push_back(operating_point(fits, labels, positives, negatives, p, true));
    curve.points.push_back(anchor(1.0, eps_linear));
    curve.auc = auc(curve.points);
    report.roc_curves.push_back(std::move(curve));
  }
  report.pooled.auc = auc(report.pooled.points);

  const RocCurve* best = nullptr;
  for (const auto& c : report.roc_curves) {
    if (!best || c.auc > best->auc + kTieTolerance ||
        (std::abs(c.auc - best->auc) <= kTieTolerance &&
         c.eps_linear > best->eps_linear))
      best = &c;
  }
  report.best_auc = best->auc;

  const RocPoint* chosen = nullptr;
  for (const auto& pt : best->points) {
    if (pt.sentinel) continue;
    const double j = pt.tpr - pt.fpr;
    if (!chosen) {
      chosen = &pt;
      continue;
    }
    const double best_j = chosen->tpr - chosen->fpr;
    if (j > best_j + kTieTolerance ||
        (std::abs(j - best_j) <= kTieTolerance &&
         pt.params.eps_slope > chosen->params.eps_slope))
      chosen = &pt;
  }
  report.best_params = chosen->params;

  std::vector<DetectionResult> results;
  results.reserve(fits.size());
  std::vector<DetectionResult> above;
  std::vector<bool> above_labels;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    DetectionResult r;
    r.fit = fits[i];
    r.fit_case = detector::classify(fits[i], report.best_params);
    r.detected = r.fit_case == detector::FitCase::sloped;
    results.push_back(r);
    const auto& rec = matrix.records[i];
    if (!rec.rtp_dbm_per_branch.empty() &&
        linkmodel::mean_rtp(rec) > rtp_partition_dbm) {
      above.push_back(r);
      above_labels.push_back(labels[i]);
    }
  }
  report.confusion_at_best = confusion(results, labels);
  if (!above.empty()) report.confusion_above_rtp = confusion(above, above_labels);
  return report;
}

}  // namespace imdet::tuner
