#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "imdet/error.hpp"
#include "imdet/spectrum.hpp"

using namespace imdet;
using namespace imdet::spectrum;

namespace {

CarrierConfig carrier_at(double fc_mhz, double bw_mhz = 10.0) {
  CarrierConfig c;
  c.center_freq_hz = fc_mhz * 1e6;
  c.bandwidth_hz = bw_mhz * 1e6;
  c.direction = Direction::downlink;
  return c;
}

const ImProduct* find(const std::vector<ImProduct>& ps, std::vector<int> coeffs) {
  for (const auto& p : ps)
    if (p.coeffs == coeffs) return &p;
  return nullptr;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("carrier validation") {
  CarrierConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.n_prb_user() == 42);
  CHECK(c.full_band_subcarriers() == 666);

  auto bad = c;
  bad.bandwidth_hz = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = c;
  bad.n_prb_control = 7;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = c;
  bad.n_prb_control = 50;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = c;
  bad.subcarrier_spacing_hz = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("direction names round-trip") {
  CHECK(direction_from_string(to_string(Direction::uplink)) == Direction::uplink);
  CHECK(direction_from_string(to_string(Direction::downlink)) == Direction::downlink);
  CHECK_THROWS_AS(direction_from_string("sideways"), InvalidInput);
}

TEST_CASE("nonlinearity") {
  Nonlinearity q{{1.0, 0.1, 0.01}};
  CHECK(q.order() == 3);
  CHECK(q(2.0) == doctest::Approx(2.0 + 0.4 + 0.08));
  CHECK_NOTHROW(q.validate());
  CHECK_THROWS_AS(Nonlinearity{{1.0}}.validate(), InvalidInput);
  CHECK_THROWS_AS((Nonlinearity{{1.0, 0.0, 0.1}}.validate()), InvalidInput);
}

TEST_CASE("IM3 of two downlink carriers") {
  const std::vector<CarrierConfig> cs{carrier_at(1930), carrier_at(1990)};
  const auto ps = enumerate_im_products(cs, 3);
  const auto* lo = find(ps, {2, -1});
  const auto* hi = find(ps, {-1, 2});
  REQUIRE(lo);
  REQUIRE(hi);
  CHECK(lo->center_freq_hz == doctest::Approx(1870e6));
  CHECK(hi->center_freq_hz == doctest::Approx(2050e6));
  CHECK(lo->order == 3);
  CHECK(hi->order == 3);
  CHECK(lo->bandwidth_hz == 30e6);
  // Only the positive-frequency representative survives.
  CHECK(find(ps, {-2, 1}) == nullptr);
  CHECK(find(ps, {1, -2}) == nullptr);
}

TEST_CASE("IM5 of two downlink carriers") {
  const std::vector<CarrierConfig> cs{carrier_at(1930), carrier_at(1990)};
  const auto ps = enumerate_im_products(cs, 5);
  const auto* lo = find(ps, {3, -2});
  const auto* hi = find(ps, {-2, 3});
  REQUIRE(lo);
  REQUIRE(hi);
  CHECK(lo->center_freq_hz == doctest::Approx(1810e6));
  CHECK(hi->center_freq_hz == doctest::Approx(2110e6));
  CHECK(lo->order == 5);
  CHECK(hi->bandwidth_hz == 50e6);
}

TEST_CASE("enumeration preconditions") {
  const std::vector<CarrierConfig> one{carrier_at(1930)};
  CHECK_THROWS_AS(enumerate_im_products(one, 3), InvalidInput);
  const std::vector<CarrierConfig> two{carrier_at(1930), carrier_at(1990)};
  CHECK_THROWS_AS(enumerate_im_products(two, 1), InvalidInput);
  CHECK_THROWS_AS(enumerate_im_products(two, 10), InvalidInput);
  CHECK_NOTHROW(enumerate_im_products(two, 9));
}

TEST_CASE("nonlinearity sets the maximum order") {
  const std::vector<CarrierConfig> cs{carrier_at(1930), carrier_at(1990)};
  const auto a = enumerate_im_products(cs, Nonlinearity{{1, 1, 1, 1, 1}});
  const auto b = enumerate_im_products(cs, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coeffs == b[i].coeffs);
}

TEST_CASE("enumerated products satisfy the order and bandwidth laws") {
  const std::vector<CarrierConfig> cs{carrier_at(1805), carrier_at(1930),
                                      carrier_at(2110)};
  for (int pmax = 2; pmax <= 7; ++pmax) {
    const auto ps = enumerate_im_products(cs, pmax);
    CHECK_FALSE(ps.empty());
    for (const auto& p : ps) {
      int sum = 0;
      double f = 0.0;
      for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        sum += std::abs(p.coeffs[i]);
        f += p.coeffs[i] * cs[i].center_freq_hz;
      }
      CHECK(p.order == sum);
      CHECK(p.order >= 2);
      CHECK(p.order <= pmax);
      CHECK(p.bandwidth_hz == p.order * 10e6);
      CHECK(p.center_freq_hz > 0.0);
      CHECK(p.center_freq_hz == doctest::Approx(f));
    }
    // No coefficient vector appears together with its negation.
    for (const auto& p : ps) {
      std::vector<int> neg = p.coeffs;
      for (int& k : neg) k = -k;
      CHECK(find(ps, neg) == nullptr);
    }
    // Stable ordering by (order, center frequency).
    CHECK(std::is_sorted(ps.begin(), ps.end(), [](const auto& a, const auto& b) {
      return a.order != b.order ? a.order < b.order : a.center_freq_hz < b.center_freq_hz;
    }));
  }
}

TEST_CASE("mixed bandwidths add per carrier") {
  const std::vector<CarrierConfig> cs{carrier_at(1930, 5), carrier_at(1990, 20)};
  const auto ps = enumerate_im_products(cs, 3);
  const auto* p = find(ps, {2, -1});
  REQUIRE(p);
  CHECK(p->bandwidth_hz == 2 * 5e6 + 20e6);
}

TEST_CASE("rel_power decreases with order") {
  const std::vector<CarrierConfig> cs{carrier_at(1930), carrier_at(1990)};
  const auto ps = enumerate_im_products(cs, 9, PowerScaling{2.0, 1.0});
  for (const auto& a : ps)
    for (const auto& b : ps)
      if (a.order < b.order) CHECK(a.rel_power > b.rel_power);
  const auto* p3 = find(ps, {2, -1});
  REQUIRE(p3);
  CHECK(p3->rel_power == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("power scaling law") {
  CHECK(im_power_scaling(1, 1.0, 2.0) == 0.25);
  CHECK(im_power_scaling(2, 1.0, 2.0) == 0.125);
  CHECK(im_power_scaling(3, 0.5, 2.0) == doctest::Approx(2.0 / 16.0));
  CHECK_THROWS_AS(im_power_scaling(3, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(im_power_scaling(3, 1.0, 0.5), InvalidInput);
  CHECK_THROWS_AS(im_power_scaling(3, 0.0, 2.0), InvalidInput);
  CHECK_THROWS_AS(im_power_scaling(0, 1.0, 2.0), InvalidInput);
  for (double b : {1.0001, 1.5, 2.0, 10.0})
    for (int p = 1; p < 12; ++p)
      CHECK(im_power_scaling(p + 1, 1.0, b) < im_power_scaling(p, 1.0, b));
}

TEST_CASE("products in an uplink band") {
  CarrierConfig victim;
  victim.center_freq_hz = 1880e6;
  victim.bandwidth_hz = 60e6;

  ImProduct inside;
  inside.coeffs = {2, -1};
  inside.order = 3;
  inside.center_freq_hz = 1870e6;
  inside.bandwidth_hz = 30e6;
  auto outside = inside;
  outside.coeffs = {-1, 2};
  outside.center_freq_hz = 2050e6;
  auto edge = inside;
  edge.coeffs = {1, 1};
  edge.center_freq_hz = 1905e6;

  const std::vector<ImProduct> all{inside, outside, edge};
  const auto in = products_in_band(all, victim);
  REQUIRE(in.size() == 2);
  CHECK(in[0].coeffs == inside.coeffs);
  CHECK(*in[0].overlap_fraction == 1.0);
  CHECK(in[1].coeffs == edge.coeffs);
  CHECK(*in[1].overlap_fraction > 0.0);
  CHECK(*in[1].overlap_fraction < 1.0);
  CHECK(*in[1].overlap_fraction == doctest::Approx(20.0 / 30.0));

  CHECK(products_in_band(std::vector<ImProduct>{outside}, victim).empty());

  // Touching the band edge is not an overlap.
  auto touching = inside;
  touching.center_freq_hz = 1925e6;
  CHECK(products_in_band(std::vector<ImProduct>{touching}, victim).empty());
}

TEST_CASE("enumeration then band filter is deterministic") {
  const std::vector<CarrierConfig> cs{carrier_at(1930), carrier_at(1990)};
  CarrierConfig victim;
  victim.center_freq_hz = 1880e6;
  victim.bandwidth_hz = 60e6;
  const auto a = products_in_band(enumerate_im_products(cs, 7), victim);
  const auto b = products_in_band(enumerate_im_products(cs, 7), victim);
  REQUIRE(a.size() == b.size());
  CHECK_FALSE(a.empty());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coeffs == b[i].coeffs);
    CHECK(a[i].center_freq_hz == b[i].center_freq_hz);
    CHECK(a[i].overlap_fraction == b[i].overlap_fraction);
  }
}

TEST_CASE("support of convolved rectangles") {
  const double B = 10e6;
  for (int p = 1; p <= 5; ++p) {
    const auto r = spectral_support(p, B, 1u << 14);
    CAPTURE(p);
    CHECK(std::abs(r.support_hz - p * B) <= 2 * r.bin_hz);
  }
  CHECK(spectral_support(1, B, 4096).support_hz == doctest::Approx(B));
  CHECK(spectral_support(2, B, 4096).support_hz == doctest::Approx(2 * B));
}

TEST_CASE("support matches a direct convolution") {
  const double B = 10e6;
  for (int p = 1; p <= 3; ++p) {
    const std::size_t grid = 4096;
    const auto r = spectral_support(p, B, grid);
    const auto width = static_cast<std::size_t>(std::llround(B / r.bin_hz));
    const auto ref = imdet::testing::rect_power(p, width);
    const auto nonzero = static_cast<std::size_t>(
        std::count_if(ref.begin(), ref.end(), [](double v) { return v > 0.5; }));
    CAPTURE(p);
    CHECK(r.nonzero_bins == nonzero);
    CHECK(r.support_hz == doctest::Approx((nonzero + p - 1) * r.bin_hz));

    // Shape: the library's magnitude is the oracle's up to a constant scale.
    std::vector<double> mag;
    for (double v : r.magnitude)
      if (v > 0.0) mag.push_back(v);
    REQUIRE(mag.size() == ref.size());
    const double scale = mag[ref.size() / 2] / ref[ref.size() / 2];
    for (std::size_t i = 0; i < ref.size(); ++i)
      CHECK(mag[i] == doctest::Approx(ref[i] * scale).epsilon(1e-12));
  }
}

TEST_CASE("second-order support is a triangle") {
  const auto r = spectral_support(2, 10e6, 3000);
  std::vector<double> mag;
  for (double v : r.magnitude)
    if (v > 0.0) mag.push_back(v);
  const auto top = std::max_element(mag.begin(), mag.end()) - mag.begin();
  CHECK(static_cast<std::size_t>(top) == mag.size() / 2);
  const double step = mag[1] - mag[0];
  for (long i = 1; i <= top; ++i) CHECK(mag[i] - mag[i - 1] == doctest::Approx(step));
  for (std::size_t i = top + 1; i < mag.size(); ++i)
    CHECK(mag[i - 1] - mag[i] == doctest::Approx(step));
}

TEST_CASE("peak amplitude falls with order") {
  double prev = 0.0;
  for (int p = 1; p <= 6; ++p) {
    const auto r = spectral_support(p, 10e6, 1u << 14);
    if (p == 1)
      CHECK(r.peak_rel_amplitude == doctest::Approx(1.0));
    else
      CHECK(r.peak_rel_amplitude < prev);
    prev = r.peak_rel_amplitude;
  }
}

TEST_CASE("support does not depend on convolution order") {
  const std::size_t grid = 4096;
  const double span = 100e6;
  std::vector<double> widths{5e6, 10e6, 20e6};
  const double bin = span / grid;
  const auto ref = spectral_support(widths, grid, span);
  std::sort(widths.begin(), widths.end());
  do {
    const auto r = spectral_support(widths, grid, span);
    CHECK(std::abs(r.support_hz - ref.support_hz) <= 2 * bin);
    CHECK(std::abs(r.support_hz - 35e6) <= 2 * bin);
  } while (std::next_permutation(widths.begin(), widths.end()));
}

TEST_CASE("support preconditions") {
  CHECK_THROWS_AS(spectral_support(0, 10e6, 4096), InvalidInput);
  CHECK_THROWS_AS(spectral_support(3, 10e6, 512), InvalidInput);
  const std::vector<double> widths{10e6, 10e6, 10e6};
  // Needs (p + 1) B = 40 MHz of span.
  CHECK_THROWS_AS(spectral_support(widths, 4096, 35e6), InvalidInput);
  CHECK_NOTHROW(spectral_support(widths, 4096, 40e6));
  CHECK_THROWS_AS(spectral_support(widths, 4096, 40e6, 1.0), InvalidInput);
}

}  // TEST_SUITE
