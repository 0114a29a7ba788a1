#include "imdet/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "imdet/error.hpp"

namespace imdet::spectrum {

std::string_view to_string(Direction d) {
  return d == Direction::uplink ? "uplink" : "downlink";
}

Direction direction_from_string(std::string_view s) {
  if (s == "uplink") return Direction::uplink;
  if (s == "downlink") return Direction::downlink;
  throw InvalidInput("direction must be \"uplink\" or \"downlink\", got \"" +
                     std::string(s) + "\"");
}

void CarrierConfig::validate() const {
  if (!std::isfinite(center_freq_hz) || center_freq_hz <= 0.0)
    throw InvalidInput("center_freq_hz must be positive");
  if (!(bandwidth_hz > 1.0))
    throw InvalidInput("bandwidth_hz must exceed 1 Hz");
  if (!(subcarrier_spacing_hz > 0.0))
    throw InvalidInput("subcarrier_spacing_hz must be positive");
  if (n_prb < 1) throw InvalidInput("n_prb must be >= 1");
  if (n_sc_per_prb < 1) throw InvalidInput("n_sc_per_prb must be >= 1");
  if (n_prb_control < 0 || n_prb_control % 2 != 0)
    throw InvalidInput("n_prb_control must be even and non-negative");
  if (n_prb_control >= n_prb)
    throw InvalidInput("n_prb_control must be smaller than n_prb");
}

std::int64_t CarrierConfig::full_band_subcarriers() const {
  return static_cast<std::int64_t>(
      std::floor(bandwidth_hz / subcarrier_spacing_hz));
}

void Nonlinearity::validate() const {
  if (coefficients.size() < 2)
    throw InvalidInput("nonlinearity order must be >= 2");
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k] == 0.0 || !std::isfinite(coefficients[k]))
      throw InvalidInput("nonlinearity coefficient a_" + std::to_string(k + 1) +
                         " must be finite and nonzero");
  }
}

double Nonlinearity::operator()(double x) const {
  // Horner, highest power first; there is no constant term.
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
    acc = (acc + *it) * x;
  return acc;
}

bool ImProduct::is_harmonic() const {
  return std::count_if(coeffs.begin(), coeffs.end(),
                       [](int k) { return k != 0; }) == 1;
}

double im_power_scaling(int order, double t_symbol, double b_tilde) {
  if (order < 1) throw InvalidInput("order must be >= 1");
  if (!(t_symbol > 0.0)) throw InvalidInput("t_symbol must be positive");
  if (!(std::abs(b_tilde) > 1.0))
    throw InvalidInput("b_tilde must exceed 1");
  return 1.0 / (t_symbol * std::pow(std::abs(b_tilde), order + 1));
}

namespace {

void enumerate_coeffs(std::size_t index, int budget, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (index == current.size()) {
    out.push_back(current);
    return;
  }
  for (int k = -budget; k <= budget; ++k) {
    current[index] = k;
    enumerate_coeffs(index + 1, budget - std::abs(k), current, out);
  }
  current[index] = 0;
}

}  // namespace

std::vector<ImProduct> enumerate_im_products(
    std::span<const CarrierConfig> carriers, int max_order,
    const PowerScaling& scaling) {
  if (carriers.size() < 2)
    throw InvalidInput("at least two carriers are required");
  if (max_order < 2 || max_order > 9)
    throw InvalidInput("max_order must lie in [2, 9]");
  for (const auto& c : carriers) c.validate();

  const double t_symbol =
      scaling.t_symbol.value_or(1.0 / carriers.front().subcarrier_spacing_hz);

  std::vector<std::vector<int>> all;
  std::vector<int> current(carriers.size(), 0);
  enumerate_coeffs(0, max_order, current, all);

  std::vector<ImProduct> products;
  for (auto& coeffs : all) {
    int order = 0;
    double freq = 0.0;
    double bw = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      order += std::abs(coeffs[i]);
      freq += coeffs[i] * carriers[i].center_freq_hz;
      bw += std::abs(coeffs[i]) * carriers[i].bandwidth_hz;
    }
    // Exactly one of k and -k has positive frequency, which also collapses
    // the global-sign duplicates.
    if (order < 2 || !(freq > 0.0)) continue;
    ImProduct p;
    p.coeffs = std::move(coeffs);
    p.order = order;
    p.center_freq_hz = freq;
    p.bandwidth_hz = bw;
    p.rel_power = im_power_scaling(order, t_symbol, scaling.b_tilde);
    products.push_back(std::move(p));
  }

  std::sort(products.begin(), products.end(),
            [](const ImProduct& a, const ImProduct& b) {
              if (a.order != b.order) return a.order < b.order;
              if (a.center_freq_hz != b.center_freq_hz)
                return a.center_freq_hz < b.center_freq_hz;
              return a.coeffs < b.coeffs;
            });
  return products;
}

std::vector<ImProduct> enumerate_im_products(
    std::span<const CarrierConfig> carriers, const Nonlinearity& q,
    const PowerScaling& scaling) {
  q.validate();
  return enumerate_im_products(carriers, q.order(), scaling);
}

std::vector<ImProduct> products_in_band(std::span<const ImProduct> products,
                                        const CarrierConfig& victim) {
  std::vector<ImProduct> hits;
  const double lo = victim.low_edge_hz();
  const double hi = victim.high_edge_hz();
  for (const auto& p : products) {
    const double overlap =
        std::min(hi, p.high_edge_hz()) - std::max(lo, p.low_edge_hz());
    if (!(overlap > 0.0)) continue;
    ImProduct hit = p;
    hit.overlap_fraction = std::min(1.0, overlap / p.bandwidth_hz);
    hits.push_back(std::move(hit));
  }
  return hits;
}

namespace {

// Convolves `in` with a run of `width` ones via a sliding prefix sum.
std::vector<std::int64_t> convolve_box(const std::vector<std::int64_t>& in,
                                       std::size_t width) {
  std::vector<std::int64_t> prefix(in.size() + 1, 0);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (__builtin_add_overflow(prefix[i], in[i], &prefix[i + 1]))
      throw InvalidInput("grid too fine for exact convolution");
  }
  const std::size_t out_len = in.size() + width - 1;
  std::vector<std::int64_t> out(out_len);
  for (std::size_t k = 0; k < out_len; ++k) {
    const std::size_t hi = std::min(k + 1, in.size());
    const std::size_t lo = k + 1 > width ? k + 1 - width : 0;
    out[k] = prefix[hi] - prefix[lo];
  }
  return out;
}

}  // namespace

SupportResult spectral_support(std::span<const double> widths_hz,
                               std::size_t grid_points, double span_hz,
                               double b_tilde) {
  if (widths_hz.empty()) throw InvalidInput("at least one pulse is required");
  if (grid_points < 1024) throw InvalidInput("grid_points must be >= 1024");
  if (!(span_hz > 0.0)) throw InvalidInput("span_hz must be positive");
  if (!(std::abs(b_tilde) > 1.0)) throw InvalidInput("b_tilde must exceed 1");

  const double bin = span_hz / static_cast<double>(grid_points);
  double total_width = 0.0;
  double max_width = 0.0;
  std::vector<std::size_t> widths_bins;
  for (double w : widths_hz) {
    if (!(w > 0.0)) throw InvalidInput("pulse widths must be positive");
    const auto n = static_cast<std::size_t>(std::llround(w / bin));
    if (n < 1) throw InvalidInput("pulse narrower than one grid bin");
    widths_bins.push_back(n);
    total_width += w;
    max_width = std::max(max_width, w);
  }
  // Small slack absorbs rounding in span = grid_points * bin.
  if (span_hz < (total_width + max_width) * (1.0 - 1e-12))
    throw InvalidInput("grid span must cover the summed widths plus one pulse");

  std::vector<std::int64_t> counts{1};
  for (std::size_t n : widths_bins) counts = convolve_box(counts, n);

  const std::size_t pulses = widths_bins.size();
  const std::size_t occupied = counts.size() + pulses - 1;
  if (occupied > grid_points)
    throw InvalidInput("grid span too small for the convolved support");

  SupportResult r;
  r.bin_hz = bin;
  r.nonzero_bins = static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(),
                    [](std::int64_t c) { return c != 0; }));
  r.support_hz = static_cast<double>(occupied) * bin;

  // Continuous-amplitude scaling: each sample step is bin / width_0 in
  // normalized frequency and each pulse has height 1 / b_tilde.
  const double step = bin / widths_hz.front();
  const double scale = std::pow(step, static_cast<double>(pulses - 1)) /
                       std::pow(std::abs(b_tilde), static_cast<double>(pulses));
  const std::int64_t peak = *std::max_element(counts.begin(), counts.end());
  r.peak_rel_amplitude = static_cast<double>(peak) * scale * std::abs(b_tilde);

  r.magnitude.assign(grid_points, 0.0);
  const std::size_t offset = (grid_points - counts.size()) / 2;
  for (std::size_t i = 0; i < counts.size(); ++i)
    r.magnitude[offset + i] = static_cast<double>(counts[i]) * scale;
  return r;
}

SupportResult spectral_support(int order, double bandwidth_hz,
                               std::size_t grid_points, double b_tilde) {
  if (order < 1) throw InvalidInput("order must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw InvalidInput("bandwidth_hz must be positive");
  if (grid_points < 1024) throw InvalidInput("grid_points must be >= 1024");
  const std::size_t per_pulse = grid_points / static_cast<std::size_t>(order + 1);
  if (per_pulse < 1) throw InvalidInput("grid too coarse for this order");
  const double bin = bandwidth_hz / static_cast<double>(per_pulse);
  const std::vector<double> widths(static_cast<std::size_t>(order),
                                   bandwidth_hz);
  return spectral_support(widths, grid_points,
                          bin * static_cast<double>(grid_points), b_tilde);
}

}  // namespace imdet::spectrum
