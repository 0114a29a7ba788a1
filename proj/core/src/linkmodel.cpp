#include "imdet/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>

#include "imdet/error.hpp"
#include "imdet/power.hpp"
#include "imdet/rng.hpp"

namespace imdet::linkmodel {

void LinkBudget::validate() const {
  if (std::isnan(p_bs_dbm)) throw InvalidInput("p_bs_dbm must be a number");
  if (!(path_loss_db > 0.0)) throw InvalidInput("path_loss_db must be positive");
  if (!(n0_dbm_hz < -100.0))
    throw InvalidInput("n0_dbm_hz must be below -100 dBm/Hz");
  if (std::isnan(p_other_interf_dbm))
    throw InvalidInput("p_other_interf_dbm must be a number or -inf");
}

double LinkBudget::p_tx_dbm(const CarrierConfig& carrier) const {
  return p_bs_dbm - 10.0 * std::log10(carrier.n_prb) -
         10.0 * std::log10(carrier.n_sc_per_prb);
}

double LinkBudget::p_c_dbm(const CarrierConfig& carrier) const {
  return p_tx_dbm(carrier) - path_loss_db;
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::internal:
      return "internal";
    case Source::external:
      return "external";
    case Source::none:
      break;
  }
  return "none";
}

Source source_from_string(std::string_view s) {
  if (s == "none") return Source::none;
  if (s == "internal") return Source::internal;
  if (s == "external") return Source::external;
  throw InvalidInput("unknown source \"" + std::string(s) + "\"");
}

void RipMatrix::validate() const {
  carrier.validate();
  const auto expected = static_cast<std::size_t>(carrier.n_prb_user());
  std::map<std::string, Timestamp> last_seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.rip_dbm.size() != expected)
      throw InvalidInput("record " + std::to_string(i) + " has " +
                         std::to_string(r.rip_dbm.size()) +
                         " RIP values, expected " + std::to_string(expected));
    if (r.rtp_dbm_per_branch.empty())
      throw InvalidInput("record " + std::to_string(i) + " has no RTP branches");
    auto [it, inserted] = last_seen.try_emplace(r.bs_id, r.timestamp);
    if (!inserted) {
      if (r.timestamp < it->second)
        throw InvalidInput("timestamps decrease for " + r.bs_id);
      it->second = r.timestamp;
    }
  }
}

double noise_floor_per_prb(double n0_dbm_hz, int n_sc, double delta_f_hz) {
  if (n_sc < 1) throw InvalidInput("n_sc must be >= 1");
  if (!(delta_f_hz > 0.0)) throw InvalidInput("delta_f_hz must be positive");
  return n0_dbm_hz + 10.0 * std::log10(static_cast<double>(n_sc) * delta_f_hz);
}

RipBoundProfile rip_bound_profile(const LinkBudget& budget,
                                  const CarrierConfig& carrier,
                                  int carrier_count, int prb_base) {
  budget.validate();
  carrier.validate();
  if (carrier_count < 2) throw InvalidInput("carrier_count must be >= 2");
  const int first = carrier.n_prb_control / 2;
  if (prb_base >= first)
    throw InvalidInput("prb_base must precede the first user-plane PRB");

  RipBoundProfile out;
  out.first_prb = first;
  out.noise_floor_dbm = noise_floor_per_prb(
      budget.n0_dbm_hz, carrier.n_sc_per_prb, carrier.subcarrier_spacing_hz);
  const double noise = dbm_to_mw(out.noise_floor_dbm);
  const double other = dbm_to_mw(budget.p_other_interf_dbm);
  const double im_scale = carrier_count * dbm_to_mw(budget.p_c_dbm(carrier));
  const double log_scale = 10.0 * std::log10(carrier_count) + budget.p_c_dbm(carrier);

  const int count = carrier.n_prb_user();
  out.bound_dbm.reserve(count);
  out.im_term_dbm.reserve(count);
  for (int u = first; u < first + count; ++u) {
    const double window =
        static_cast<double>(u - prb_base) / static_cast<double>(carrier.n_prb);
    const double im = im_scale * std::exp(window);
    out.bound_dbm.push_back(mw_to_dbm(noise + other + im));
    // Evaluated in log form so the term is exactly affine in u.
    out.im_term_dbm.push_back(log_scale +
                              10.0 * std::numbers::log10e * window);
  }
  return out;
}

void ScenarioSpec::validate(const CarrierConfig& carrier) const {
  if (!std::isfinite(slope_db_per_prb))
    throw InvalidInput("slope_db_per_prb must be finite");
  if (im_present && !(im_offset_db > 0.0))
    throw InvalidInput("im_offset_db must be positive when IM is present");
  if (im_present &&
      !(im_offset_db + slope_db_per_prb * (carrier.n_prb_user() - 1) > 0.0))
    throw InvalidInput("IM envelope must stay above the noise floor");
  if (!(clutter_sigma_db >= 0.0) || !std::isfinite(clutter_sigma_db))
    throw InvalidInput("clutter_sigma_db must be finite and >= 0");
  if (!(occupancy_prob >= 0.0 && occupancy_prob <= 1.0))
    throw InvalidInput("occupancy_prob must lie in [0, 1]");
  if (occupancy_prob > 0.0 && !(occupancy_boost_db > 0.0))
    throw InvalidInput("occupancy_boost_db must be positive");
  if (branch_count < 1) throw InvalidInput("branch_count must be >= 1");
  if (internal_source && !im_present)
    throw InvalidInput("internal_source requires im_present");
  if (internal_source && branch_count < 2)
    throw InvalidInput("internal_source requires at least two branches");
  if (!std::isfinite(floor_offset_db))
    throw InvalidInput("floor_offset_db must be finite");
  for (const auto& nb : interferers) {
    if (nb.prb_index < 0 || nb.prb_index >= carrier.n_prb)
      throw InvalidInput("interferer prb_index " + std::to_string(nb.prb_index) +
                         " outside the carrier");
    if (!(nb.boost_db > 0.0) || !std::isfinite(nb.boost_db))
      throw InvalidInput("interferer boost_db must be positive");
  }
}

MeasurementRecord synth_record(const CarrierConfig& carrier,
                               const LinkBudget& budget,
                               const ScenarioSpec& scenario,
                               std::uint64_t rng_seed) {
  carrier.validate();
  budget.validate();
  scenario.validate(carrier);

  Rng rng(rng_seed);
  const int n_prb = carrier.n_prb;
  const int first = carrier.n_prb_control / 2;
  const int n_user = carrier.n_prb_user();
  const int branches = scenario.branch_count;

  const double thermal_dbm = noise_floor_per_prb(
      budget.n0_dbm_hz, carrier.n_sc_per_prb, carrier.subcarrier_spacing_hz);
  const double floor_dbm = thermal_dbm + scenario.floor_offset_db;
  const double floor_mw = dbm_to_mw(floor_dbm);
  const double other_per_prb =
      dbm_to_mw(budget.p_other_interf_dbm) / static_cast<double>(n_prb);

  // Contributions common to every branch: narrowband and traffic.
  std::vector<double> shared(n_prb, 0.0);
  for (const auto& nb : scenario.interferers)
    shared[nb.prb_index] += floor_mw * (std::pow(10.0, nb.boost_db / 10.0) - 1.0);
  if (scenario.occupancy_prob > 0.0) {
    const double traffic =
        floor_mw * (std::pow(10.0, scenario.occupancy_boost_db / 10.0) - 1.0);
    for (int u = first; u < first + n_user; ++u)
      if (rng.uniform() < scenario.occupancy_prob) shared[u] += traffic;
  }

  // IM excess over the floor, shaped as a line in dB.
  std::vector<double> im(n_prb, 0.0);
  if (scenario.im_present) {
    for (int i = 0; i < n_user; ++i) {
      const double level =
          floor_dbm + scenario.im_offset_db + scenario.slope_db_per_prb * i;
      im[first + i] = dbm_to_mw(level) - floor_mw;
    }
  }

  int hot_branch = 0;
  if (scenario.internal_source)
    hot_branch = static_cast<int>(rng.below(static_cast<std::uint64_t>(branches)));

  const double guard_hz = std::max(
      0.0, carrier.bandwidth_hz - static_cast<double>(n_prb) *
                                      carrier.n_sc_per_prb *
                                      carrier.subcarrier_spacing_hz);
  const double guard_mw = dbm_to_mw(budget.n0_dbm_hz + scenario.floor_offset_db) *
                          guard_hz;
  const double p_c_mw = dbm_to_mw(budget.p_c_dbm(carrier));
  const double clamp_dbm = thermal_dbm - 3.0;

  MeasurementRecord rec;
  rec.bs_id = scenario.bs_id;
  rec.timestamp = scenario.timestamp;
  rec.rtp_dbm_per_branch.reserve(branches);

  std::vector<double> prb_dbm(n_prb);
  for (int b = 0; b < branches; ++b) {
    const bool carries_im =
        scenario.im_present && (!scenario.internal_source || b == hot_branch);
    for (int u = 0; u < n_prb; ++u) {
      double mw = floor_mw + other_per_prb + shared[u];
      if (carries_im) mw += im[u];
      prb_dbm[u] = mw_to_dbm(mw);
    }
    if (scenario.clutter_sigma_db > 0.0) {
      for (int u = first; u < first + n_user; ++u)
        prb_dbm[u] += rng.normal(0.0, scenario.clutter_sigma_db);
      for (int u = 0; u < first; ++u) {
        const double c = rng.normal(0.0, scenario.clutter_sigma_db);
        prb_dbm[u] += c;
        prb_dbm[n_prb - 1 - u] += c;
      }
    }
    double total = p_c_mw + guard_mw;
    for (int u = 0; u < n_prb; ++u) {
      prb_dbm[u] = std::max(prb_dbm[u], clamp_dbm);
      total += dbm_to_mw(prb_dbm[u]);
    }
    rec.rtp_dbm_per_branch.push_back(mw_to_dbm(total));
    if (b == hot_branch)
      rec.rip_dbm.assign(prb_dbm.begin() + first,
                         prb_dbm.begin() + first + n_user);
  }

  rec.label_im_present = scenario.im_present;
  rec.label_source = !scenario.im_present ? Source::none
                     : scenario.internal_source ? Source::internal
                                                : Source::external;
  return rec;
}

void DatasetSpec::validate() const {
  carrier.validate();
  budget.validate();
  if (record_count < 0) throw InvalidInput("record_count must be >= 0");
  if (positive_count < 0) throw InvalidInput("positive_count must be >= 0");
  if (low_rtp_count < 0) throw InvalidInput("low_rtp_count must be >= 0");
  if (positive_count > record_count)
    throw InvalidInput("positive_count exceeds record_count");
  if (positive_count + low_rtp_count > record_count)
    throw InvalidInput("positive_count + low_rtp_count exceeds record_count");
  if (branch_count < 1) throw InvalidInput("branch_count must be >= 1");
  if (bs_count < 1) throw InvalidInput("bs_count must be >= 1");
  if (!(clutter_sigma_db >= 0.0)) throw InvalidInput("clutter_sigma_db must be >= 0");
  if (!(positive_rise_min_db <= positive_rise_max_db))
    throw InvalidInput("positive_rise_min_db exceeds positive_rise_max_db");
  if (!(im_offset_min_db > 0.0 && im_offset_min_db <= im_offset_max_db))
    throw InvalidInput("im_offset range must be positive and ordered");
  if (!(internal_fraction >= 0.0 && internal_fraction <= 1.0))
    throw InvalidInput("internal_fraction must lie in [0, 1]");
  if (internal_fraction > 0.0 && branch_count < 2 && positive_count > 0)
    throw InvalidInput("internal sources require branch_count >= 2");
  if (!(narrowband_prob >= 0.0 && narrowband_prob <= 1.0))
    throw InvalidInput("narrowband_prob must lie in [0, 1]");
  if (!(narrowband_boost_min_db > 0.0 &&
        narrowband_boost_min_db <= narrowband_boost_max_db))
    throw InvalidInput("narrowband boost range must be positive and ordered");
  if (!(occupancy_prob >= 0.0 && occupancy_prob <= 1.0))
    throw InvalidInput("occupancy_prob must lie in [0, 1]");
}

namespace {

enum class Kind { positive, negative, low_rtp };

}  // namespace

RipMatrix synth_dataset(const DatasetSpec& spec, std::uint64_t rng_seed) {
  spec.validate();

  std::vector<Kind> layout;
  layout.reserve(spec.record_count);
  layout.insert(layout.end(), spec.positive_count, Kind::positive);
  layout.insert(layout.end(), spec.low_rtp_count, Kind::low_rtp);
  layout.insert(layout.end(),
                spec.record_count - spec.positive_count - spec.low_rtp_count,
                Kind::negative);
  Rng shuffle(splitmix64(rng_seed));
  for (std::size_t i = layout.size(); i > 1; --i)
    std::swap(layout[i - 1], layout[shuffle.below(i)]);

  const int internal_quota = static_cast<int>(
      std::lround(spec.internal_fraction * spec.positive_count));
  const int n_user = spec.carrier.n_prb_user();
  const int first = spec.carrier.n_prb_control / 2;

  RipMatrix out;
  out.carrier = spec.carrier;
  out.records.reserve(layout.size());
  int positives_seen = 0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    Rng rng(record_seed(rng_seed, i));
    ScenarioSpec sc;
    sc.branch_count = spec.branch_count;
    sc.clutter_sigma_db = spec.clutter_sigma_db;
    sc.occupancy_prob = spec.occupancy_prob;
    sc.occupancy_boost_db = spec.occupancy_boost_db;
    sc.timestamp = spec.start + std::chrono::hours{static_cast<long>(i)};
    char id[16];
    std::snprintf(id, sizeof id, "BS%03d",
                  static_cast<int>(i % static_cast<std::size_t>(spec.bs_count)));
    sc.bs_id = id;

    switch (layout[i]) {
      case Kind::positive: {
        sc.im_present = true;
        const double rise =
            rng.uniform(spec.positive_rise_min_db, spec.positive_rise_max_db);
        sc.slope_db_per_prb = n_user > 1 ? rise / (n_user - 1) : 0.0;
        sc.im_offset_db = rng.uniform(spec.im_offset_min_db, spec.im_offset_max_db);
        sc.internal_source = positives_seen < internal_quota;
        ++positives_seen;
        break;
      }
      case Kind::low_rtp:
        sc.floor_offset_db = spec.low_rtp_floor_offset_db;
        break;
      case Kind::negative:
        if (rng.uniform() < spec.narrowband_prob) {
          NarrowbandInterferer nb;
          nb.prb_index = first + static_cast<int>(rng.below(n_user));
          nb.boost_db = rng.uniform(spec.narrowband_boost_min_db,
                                    spec.narrowband_boost_max_db);
          sc.interferers.push_back(nb);
        }
        break;
    }
    out.records.push_back(
        synth_record(spec.carrier, spec.budget, sc, rng.next_u64()));
  }
  return out;
}

double mean_rtp(const MeasurementRecord& record) {
  if (record.rtp_dbm_per_branch.empty())
    throw InvalidInput("record has no RTP branches");
  double sum = 0.0;
  for (double v : record.rtp_dbm_per_branch) sum += dbm_to_mw(v);
  return mw_to_dbm(sum / static_cast<double>(record.rtp_dbm_per_branch.size()));
}

double max_branch_gap_db(const MeasurementRecord& record) {
  const auto& v = record.rtp_dbm_per_branch;
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace imdet::linkmodel
