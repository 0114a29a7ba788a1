#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imdet/spectrum.hpp"
#include "imdet/timestamp.hpp"

namespace imdet::linkmodel {

using spectrum::CarrierConfig;

struct LinkBudget {
  double p_bs_dbm = 46.0;
  double path_loss_db = 130.0;
  double n0_dbm_hz = -174.0;
  /// Wideband non-intermodulation interference; -inf when absent.
  double p_other_interf_dbm = -std::numeric_limits<double>::infinity();

  void validate() const;

  /// Per-subcarrier transmit power P_BS - 10 log N_PRB - 10 log N_SC.
  double p_tx_dbm(const CarrierConfig& carrier) const;
  /// Received fundamental power P_c = P_TX - L.
  double p_c_dbm(const CarrierConfig& carrier) const;
};

enum class Source { none, internal, external };

std::string_view to_string(Source s);
Source source_from_string(std::string_view s);

/// One hourly measurement of a base station: user-plane RIP plus wideband
/// RTP per receive branch.
struct MeasurementRecord {
  std::string bs_id;
  Timestamp timestamp{};
  std::vector<double> rip_dbm;
  std::vector<double> rtp_dbm_per_branch;
  std::optional<bool> label_im_present;
  std::optional<Source> label_source;
};

/// Records sharing one carrier layout.
struct RipMatrix {
  CarrierConfig carrier;
  std::vector<MeasurementRecord> records;

  /// Checks row lengths, non-empty branch vectors, and per-BS timestamp
  /// ordering. Throws InvalidInput.
  void validate() const;
  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

/// Thermal noise over one PRB: n0 + 10 log10(n_sc * delta_f).
double noise_floor_per_prb(double n0_dbm_hz, int n_sc, double delta_f_hz);

/// Upper bound on RIP across the user-plane PRBs:
///   N0 N_SC df + P_I + m P_c exp((u - b) / N_PRB)
/// evaluated for every user-plane PRB u. P_c is the per-subcarrier received
/// power from the budget. In dBm the last term is a line with slope
/// 10 log10(e) / N_PRB per PRB.
struct RipBoundProfile {
  int first_prb = 0;
  double noise_floor_dbm = 0.0;
  std::vector<double> bound_dbm;
  std::vector<double> im_term_dbm;
};

RipBoundProfile rip_bound_profile(const LinkBudget& budget,
                                  const CarrierConfig& carrier,
                                  int carrier_count, int prb_base);

/// One-PRB interferer raising PRB `prb_index` (absolute numbering) by
/// `boost_db` above the noise floor.
struct NarrowbandInterferer {
  int prb_index = 0;
  double boost_db = 0.0;
};

struct ScenarioSpec {
  bool im_present = false;
  /// IM envelope slope across user-plane PRBs, dB per PRB.
  double slope_db_per_prb = 0.0;
  /// IM envelope level above the noise floor at the first user-plane PRB.
  double im_offset_db = 6.0;
  double clutter_sigma_db = 0.0;
  std::vector<NarrowbandInterferer> interferers;
  /// Probability that a user-plane PRB carries traffic, and the traffic level
  /// above the noise floor when it does.
  double occupancy_prob = 0.0;
  double occupancy_boost_db = 0.0;
  int branch_count = 2;
  /// IM originates inside one receive path: only one branch sees it.
  bool internal_source = false;
  /// Receiver noise level relative to thermal.
  double floor_offset_db = 0.0;

  std::string bs_id = "BS000";
  Timestamp timestamp{};

  void validate(const CarrierConfig& carrier) const;
};

/// Synthesizes one labeled record. Powers are composed in mW per PRB and
/// branch; clutter is applied in dB afterwards. The record's RIP is the
/// branch carrying the IM term (branch 0 when no branch is singled out).
/// Each branch's RTP is P_c plus the guard-band noise plus the sum of all
/// N_PRB per-PRB powers on that branch. Control-plane PRBs carry the noise
/// floor with mirrored clutter on the two band edges.
MeasurementRecord synth_record(const CarrierConfig& carrier,
                               const LinkBudget& budget,
                               const ScenarioSpec& scenario,
                               std::uint64_t rng_seed);

struct DatasetSpec {
  CarrierConfig carrier;
  LinkBudget budget;
  int record_count = 100;
  int positive_count = 6;
  /// Negative records generated with a quieter receiver so their mean RTP is
  /// at or below `low_rtp_threshold_dbm`.
  int low_rtp_count = 2;
  double low_rtp_threshold_dbm = -104.0;
  double low_rtp_floor_offset_db = -2.0;
  int branch_count = 2;
  int bs_count = 25;
  double clutter_sigma_db = 0.25;
  /// Total IM rise across the user-plane span for positives, dB.
  double positive_rise_min_db = 8.0;
  double positive_rise_max_db = 12.0;
  double im_offset_min_db = 4.0;
  double im_offset_max_db = 8.0;
  double internal_fraction = 0.5;
  /// Chance that a negative record carries one narrowband interferer.
  double narrowband_prob = 0.2;
  double narrowband_boost_min_db = 6.0;
  double narrowband_boost_max_db = 15.0;
  double occupancy_prob = 0.0;
  double occupancy_boost_db = 1.0;
  Timestamp start = Timestamp{std::chrono::sys_days{std::chrono::year{2023} /
                                                    std::chrono::January / 1}};

  void validate() const;
};

/// Generates `record_count` records with exactly `positive_count` positives
/// and `low_rtp_count` low-RTP negatives, shuffled deterministically.
/// Record i is generated from record_seed(seed, i), so records can be built
/// independently.
RipMatrix synth_dataset(const DatasetSpec& spec, std::uint64_t rng_seed);

/// Mean of the branch RTPs in linear power, in dBm.
double mean_rtp(const MeasurementRecord& record);

/// Largest pairwise difference between branch RTPs, dB.
double max_branch_gap_db(const MeasurementRecord& record);

}  // namespace imdet::linkmodel
