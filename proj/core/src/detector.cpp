#include "imdet/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imdet/error.hpp"

namespace imdet::detector {

void DetectorParams::validate() const {
  if (!(eps_linear > 0.0 && eps_linear <= 1.0))
    throw InvalidInput("eps_linear must lie in (0, 1]");
  if (!(eps_slope > 0.0)) throw InvalidInput("eps_slope must be positive");
  if (rtp_prefilter_dbm && std::isnan(*rtp_prefilter_dbm))
    throw InvalidInput("rtp_prefilter_dbm must be a number");
  if (!(internal_gap_db >= 0.0))
    throw InvalidInput("internal_gap_db must be >= 0");
}

std::string_view to_string(FitCase c) {
  switch (c) {
    case FitCase::flat:
      return "flat";
    case FitCase::sloped:
      return "sloped";
    case FitCase::poor_fit:
      break;
  }
  return "poor_fit";
}

std::string_view to_string(SourceClass s) {
  switch (s) {
    case SourceClass::internal:
      return "internal";
    case SourceClass::external:
      return "external";
    case SourceClass::not_applicable:
      break;
  }
  return "not_applicable";
}

FitCase fit_case_from_string(std::string_view s) {
  if (s == "poor_fit") return FitCase::poor_fit;
  if (s == "flat") return FitCase::flat;
  if (s == "sloped") return FitCase::sloped;
  throw InvalidInput("unknown fit case \"" + std::string(s) + "\"");
}

SourceClass source_class_from_string(std::string_view s) {
  if (s == "internal") return SourceClass::internal;
  if (s == "external") return SourceClass::external;
  if (s == "not_applicable") return SourceClass::not_applicable;
  throw InvalidInput("unknown source class \"" + std::string(s) + "\"");
}

IndexRange user_plane_slice(const CarrierConfig& carrier) {
  carrier.validate();
  const int half = carrier.n_prb_control / 2;
  return {half, carrier.n_prb - half - 1};
}

RegressionFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw InvalidInput("x and y lengths differ: " + std::to_string(x.size()) +
                       " vs " + std::to_string(y.size()));
  if (x.size() < 3) throw InvalidInput("at least three points are required");

  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InvalidInput("x values are all equal");
  if (!std::isfinite(sxy) || !std::isfinite(syy))
    throw InvalidInput("non-finite y values");

  RegressionFit fit;
  if (syy == 0.0) {
    fit.intercept = my;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // 1 - SS_res / SS_tot with SS_res = syy - slope * sxy.
  fit.r_squared = std::clamp(fit.slope * sxy / syy, 0.0, 1.0);
  return fit;
}

FitCase classify(const RegressionFit& fit, const DetectorParams& params) {
  if (!(fit.r_squared > params.eps_linear)) return FitCase::poor_fit;
  if (!(fit.slope > params.eps_slope)) return FitCase::flat;
  return FitCase::sloped;
}

RegressionFit fit_record(const MeasurementRecord& record,
                         const CarrierConfig& carrier) {
  const auto range = user_plane_slice(carrier);
  const auto n = static_cast<std::size_t>(range.size());
  if (record.rip_dbm.size() != n)
    throw InvalidInput("record has " + std::to_string(record.rip_dbm.size()) +
                       " RIP values, carrier has " + std::to_string(n) +
                       " user-plane PRBs");

  std::vector<double> x(n);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i) / denom;
  return ols_fit(x, record.rip_dbm);
}

DetectionResult detect_record(const MeasurementRecord& record,
                              const CarrierConfig& carrier,
                              const DetectorParams& params) {
  DetectionResult result;
  if (params.rtp_prefilter_dbm && !record.rtp_dbm_per_branch.empty() &&
      linkmodel::mean_rtp(record) <= *params.rtp_prefilter_dbm) {
    result.prefiltered = true;
    return result;
  }

  result.fit = fit_record(record, carrier);
  result.fit_case = classify(result.fit, params);
  result.detected = result.fit_case == FitCase::sloped;
  if (result.detected) {
    result.source = linkmodel::max_branch_gap_db(record) > params.internal_gap_db
                        ? SourceClass::internal
                        : SourceClass::external;
  }
  return result;
}

std::vector<DetectionResult> detect_matrix(const RipMatrix& matrix,
                                           const DetectorParams& params) {
  params.validate();
  std::vector<DetectionResult> out;
  out.reserve(matrix.records.size());
  for (const auto& r : matrix.records)
    out.push_back(detect_record(r, matrix.carrier, params));
  return out;
}

}  // namespace imdet::detector
