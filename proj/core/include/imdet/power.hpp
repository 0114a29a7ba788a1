#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace imdet {

// dBm <-> mW. Negative infinity dBm maps to exactly zero power.

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double mw_to_dbm(double mw) {
  if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

/// Sum of powers given in dBm, composed in the linear domain.
inline double sum_dbm(std::span<const double> dbm) {
  double total = 0.0;
  for (double v : dbm) total += dbm_to_mw(v);
  return mw_to_dbm(total);
}

}  // namespace imdet
