#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace imdet::spectrum {

enum class Direction { uplink, downlink };

std::string_view to_string(Direction d);
Direction direction_from_string(std::string_view s);

/// One OFDM carrier and its PRB layout.
///
/// `n_sc_per_prb` is the per-PRB subcarrier count (12 for LTE/NR). The
/// full-band subcarrier budget floor(B / delta_f) is available separately via
/// full_band_subcarriers() and is not required to equal n_prb * n_sc_per_prb.
/// Control-plane PRBs sit at the band edges, half on each side.
struct CarrierConfig {
  double center_freq_hz = 1880.0e6;
  double bandwidth_hz = 10.0e6;
  double subcarrier_spacing_hz = 15.0e3;
  int n_prb = 50;
  int n_sc_per_prb = 12;
  int n_prb_control = 8;
  Direction direction = Direction::uplink;

  /// Throws InvalidInput naming the first violated constraint.
  void validate() const;

  int n_prb_user() const { return n_prb - n_prb_control; }
  std::int64_t full_band_subcarriers() const;
  double low_edge_hz() const { return center_freq_hz - bandwidth_hz / 2.0; }
  double high_edge_hz() const { return center_freq_hz + bandwidth_hz / 2.0; }
};

/// Memoryless polynomial q(x) = sum_k a_k x^k, k = 1..p.
struct Nonlinearity {
  std::vector<double> coefficients;

  int order() const { return static_cast<int>(coefficients.size()); }
  void validate() const;
  double operator()(double x) const;
};

/// Spectral component at sum_i k_i f_i.
struct ImProduct {
  std::vector<int> coeffs;
  int order = 0;
  double center_freq_hz = 0.0;
  double bandwidth_hz = 0.0;
  double rel_power = 0.0;
  /// Fraction of the product bandwidth inside a victim band; set by
  /// products_in_band().
  std::optional<double> overlap_fraction;

  double low_edge_hz() const { return center_freq_hz - bandwidth_hz / 2.0; }
  double high_edge_hz() const { return center_freq_hz + bandwidth_hz / 2.0; }
  /// True when exactly one carrier contributes (a pure harmonic).
  bool is_harmonic() const;
};

struct PowerScaling {
  double b_tilde = 2.0;
  /// Symbol duration T. Defaults to 1 / delta_f of the first carrier.
  std::optional<double> t_symbol;
};

/// Relative power 1 / (T |b_tilde|^(p+1)) of an order-p product.
double im_power_scaling(int order, double t_symbol, double b_tilde);

/// Every product with 2 <= order <= max_order and positive center frequency,
/// sorted by (order, center frequency, coefficients). A coefficient vector
/// and its negation are the same product; only the positive-frequency
/// representative is kept. Product bandwidth is sum_i |k_i| B_i, which is
/// order * B when all carriers share a bandwidth.
std::vector<ImProduct> enumerate_im_products(
    std::span<const CarrierConfig> carriers, int max_order,
    const PowerScaling& scaling = {});

/// Convenience overload taking the order from a nonlinearity.
std::vector<ImProduct> enumerate_im_products(
    std::span<const CarrierConfig> carriers, const Nonlinearity& q,
    const PowerScaling& scaling = {});

/// Products whose occupied interval overlaps the victim band with positive
/// length. Order is preserved.
std::vector<ImProduct> products_in_band(std::span<const ImProduct> products,
                                        const CarrierConfig& victim);

struct SupportResult {
  double support_hz = 0.0;
  double bin_hz = 0.0;
  /// Peak amplitude relative to a single pulse.
  double peak_rel_amplitude = 0.0;
  std::size_t nonzero_bins = 0;
  /// Convolved magnitude, normalized so a single pulse has height 1 / b_tilde
  /// and frequency is measured in units of the first pulse's width.
  std::vector<double> magnitude;
};

/// Convolves rectangular pulses of the given widths on a grid of
/// `grid_points` bins spanning `span_hz`.
///
/// Each pulse is a run of unit samples, so the convolution is carried out
/// exactly in integer arithmetic and the support is the set of bins with a
/// nonzero count. Samples are treated as zero-order-hold bins, so a result
/// with L nonzero samples built from P pulses occupies (L + P - 1) bins.
SupportResult spectral_support(std::span<const double> widths_hz,
                               std::size_t grid_points, double span_hz,
                               double b_tilde = 2.0);

/// Support of the p-fold self-convolution of a width-B pulse. The grid
/// spacing is chosen so B spans an integer number of bins and the grid
/// covers at least (p + 1) B.
SupportResult spectral_support(int order, double bandwidth_hz,
                               std::size_t grid_points, double b_tilde = 2.0);

}  // namespace imdet::spectrum
