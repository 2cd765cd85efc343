// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamsim/array.hpp"
#include "beamsim/cmatrix.hpp"
#include "beamsim/rng.hpp"

namespace beamsim {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class ScenarioKind { UMi, UMa, RMa };
enum class Environment { LoS };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::UMi: return "UMi";
    case ScenarioKind::UMa: return "UMa";
    case ScenarioKind::RMa: return "RMa";
  }
  return "?";
}

/// Deployment scenario parameters. Geometry and power follow 3GPP-style
/// UMi/UMa/RMa tables; the clustered-model knobs (K-factor, decay, shadow,
/// delay spread) are this simulator's own and are all overridable.
/// Atmospheric fields are carried for config fidelity but add zero loss.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::UMi;
  double carrier_ghz = 28.0;
  double bs_height_m = 10.0;
  double ut_height_m = 1.0;
  double min_dist_2d_m = 10.0;
  double max_dist_2d_m = 500.0;
  double tx_power_dbm = 30.0;
  Environment environment = Environment::LoS;
  double path_loss_exponent = 2.0;  // close-in reference at 1 m
  double shadow_sigma_db = 4.0;     // per-cluster, truncated at +/- 2 sigma
  double k_factor_db = 50.0;        // dominant path over strongest secondary
  std::size_t max_clusters = 5;
  double cluster_decay_db = 6.0;  // per secondary-cluster index
  double delay_spread_ns = 100.0;
  double aod_sector_half_deg = 50.0;  // sectorized BS: LoS departure in [-s, s]
  double aoa_range_half_deg = 90.0;   // random UT orientation: arrival in [-r, r]

  // Recorded only; no propagation effect in this model.
  double barometric_mbar = 1013.25;
  double humidity_percent = 50.0;
  double temperature_c = 20.0;
  double rain_mm_per_hr = 0.0;
  double foliage_loss_db = 0.0;
};

inline void validate(const ScenarioConfig& c) {
  if (!(c.carrier_ghz > 0.0)) throw std::invalid_argument("scenario: carrier_ghz must be > 0");
  if (c.kind == ScenarioKind::RMa && c.carrier_ghz > 7.0)
    throw std::invalid_argument("scenario: RMa carrier_ghz is capped at 7 GHz");
  if (!(c.min_dist_2d_m > 0.0) || !(c.max_dist_2d_m > 0.0))
    throw std::invalid_argument("scenario: distances must be > 0");
  if (!(c.min_dist_2d_m < c.max_dist_2d_m))
    throw std::invalid_argument("scenario: min_dist_2d_m must be < max_dist_2d_m");
  if (c.max_clusters < 1) throw std::invalid_argument("scenario: max_clusters must be >= 1");
  if (!(c.shadow_sigma_db >= 0.0)) throw std::invalid_argument("scenario: shadow_sigma_db must be >= 0");
  if (!(c.delay_spread_ns >= 0.0)) throw std::invalid_argument("scenario: delay_spread_ns must be >= 0");
  if (!(c.aod_sector_half_deg > 0.0 && c.aod_sector_half_deg <= 90.0))
    throw std::invalid_argument("scenario: aod_sector_half_deg must be in (0, 90]");
  if (!(c.aoa_range_half_deg > 0.0 && c.aoa_range_half_deg <= 90.0))
    throw std::invalid_argument("scenario: aoa_range_half_deg must be in (0, 90]");
}

/// Scenario defaults: BS height 10/25/35 m, UT height 1/1/1.5 m and minimum
/// 2D distance 10/35/35 m for UMi/UMa/RMa; range up to 500 m, 30 dBm Tx.
inline ScenarioConfig scenario_defaults(ScenarioKind kind, double carrier_ghz) {
  ScenarioConfig c;
  c.kind = kind;
  c.carrier_ghz = carrier_ghz;
  switch (kind) {
    case ScenarioKind::UMi:
      c.bs_height_m = 10.0;
      c.ut_height_m = 1.0;
      c.min_dist_2d_m = 10.0;
      break;
    case ScenarioKind::UMa:
      c.bs_height_m = 25.0;
      c.ut_height_m = 1.0;
      c.min_dist_2d_m = 35.0;
      break;
    case ScenarioKind::RMa:
      c.bs_height_m = 35.0;
      c.ut_height_m = 1.5;
      c.min_dist_2d_m = 35.0;
      break;
  }
  validate(c);
  return c;
}

/// One propagation path. gain carries the path-loss share, per-cluster
/// shadowing and a random phase; Tx power is deliberately not folded in.
struct PathCluster {
  cxd gain;
  double aod_deg = 0.0;
  double aoa_deg = 0.0;
  double delay_ns = 0.0;
};

/// Clustered realization: cluster 0 is the dominant LoS path.
struct ChannelRealization {
  std::vector<PathCluster> clusters;
  double ut_distance_m = 0.0;
  double ut_bearing_deg = 0.0;
  double carrier_ghz = 0.0;
};

struct ChannelMatrix {
  CMatrix entries;
  double carrier_ghz = 0.0;
  std::string meta;  // originating scenario tag or "ingested"
};

/// Free-space close-in path loss amplitude: FSPL(1 m) plus
/// 10 * n * log10(d) dB, returned as a linear amplitude factor.
inline double path_amplitude(double carrier_ghz, double dist_m, double exponent) {
  const double f_hz = carrier_ghz * 1e9;
  const double fspl_1m_db = 20.0 * std::log10(4.0 * kPi * f_hz / kSpeedOfLight);
  const double pl_db = fspl_1m_db + 10.0 * exponent * std::log10(std::max(dist_m, 1.0));
  return std::pow(10.0, -pl_db / 20.0);
}

/// Draw one clustered channel realization. Fixed draw order per stream:
/// distance, LoS AoD (= UT bearing), LoS AoA, LoS phase, cluster count,
/// then per secondary cluster: AoD, AoA, shadowing, delay, phase.
inline ChannelRealization draw_realization(const ScenarioConfig& cfg, SplitMix64& rng) {
  validate(cfg);
  ChannelRealization real;
  real.carrier_ghz = cfg.carrier_ghz;

  // Area-uniform over the annulus: radius density proportional to r.
  const double r2 = cfg.min_dist_2d_m * cfg.min_dist_2d_m +
                    rng.next_double() * (cfg.max_dist_2d_m * cfg.max_dist_2d_m -
                                         cfg.min_dist_2d_m * cfg.min_dist_2d_m);
  real.ut_distance_m = std::sqrt(r2);
  real.ut_bearing_deg = rng.uniform(-cfg.aod_sector_half_deg, cfg.aod_sector_half_deg);

  const double los_aoa = rng.uniform(-cfg.aoa_range_half_deg, cfg.aoa_range_half_deg);
  const double los_amp = path_amplitude(cfg.carrier_ghz, real.ut_distance_m, cfg.path_loss_exponent);
  const double los_phase = rng.uniform(0.0, 2.0 * kPi);
  const double los_delay_ns = real.ut_distance_m / kSpeedOfLight * 1e9;

  PathCluster los;
  los.gain = std::polar(los_amp, los_phase);
  los.aod_deg = real.ut_bearing_deg;
  los.aoa_deg = los_aoa;
  los.delay_ns = los_delay_ns;
  real.clusters.push_back(los);

  const std::size_t n_clusters = 1 + static_cast<std::size_t>(rng.below(cfg.max_clusters));
  const double los_amp_db = 20.0 * std::log10(los_amp);
  for (std::size_t j = 0; j + 1 < n_clusters; ++j) {
    PathCluster sec;
    sec.aod_deg = rng.uniform(-cfg.aod_sector_half_deg, cfg.aod_sector_half_deg);
    sec.aoa_deg = rng.uniform(-cfg.aoa_range_half_deg, cfg.aoa_range_half_deg);
    double shadow = rng.normal(0.0, cfg.shadow_sigma_db);
    // Truncated so the LoS cluster stays dominant in every realization.
    shadow = std::clamp(shadow, -2.0 * cfg.shadow_sigma_db, 2.0 * cfg.shadow_sigma_db);
    const double amp_db = los_amp_db - cfg.k_factor_db -
                          cfg.cluster_decay_db * static_cast<double>(j) + shadow;
    sec.delay_ns = los_delay_ns + rng.exponential(cfg.delay_spread_ns);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    sec.gain = std::polar(std::pow(10.0, amp_db / 20.0), phase);
    real.clusters.push_back(sec);
  }
  return real;
}

/// H = sum_l g_l * exp(-i 2 pi (f_c + offset) tau_l) * a_rx(aoa_l) a_tx(aod_l)^H.
inline ChannelMatrix realization_to_matrix(const ChannelRealization& real,
                                           const ArrayGeometry& tx, const ArrayGeometry& rx,
                                           double sub_carrier_hz_offset = 0.0) {
  validate(tx);
  validate(rx);
  if (real.clusters.empty()) throw std::domain_error("realization_to_matrix: no clusters");
  ChannelMatrix h;
  h.carrier_ghz = real.carrier_ghz;
  h.meta = "realization";
  h.entries = CMatrix(rx.num_elements, tx.num_elements);
  const double f_hz = real.carrier_ghz * 1e9 + sub_carrier_hz_offset;
  for (const PathCluster& cl : real.clusters) {
    const SteeringVector a_rx = steering_vector(rx, cl.aoa_deg);
    const SteeringVector a_tx = steering_vector(tx, cl.aod_deg);
    const double phase = -2.0 * kPi * f_hz * cl.delay_ns * 1e-9;
    const cxd scale = cl.gain * std::polar(1.0, std::fmod(phase, 2.0 * kPi));
    for (std::size_t r = 0; r < rx.num_elements; ++r) {
      const cxd row = scale * a_rx.elements[r];
      for (std::size_t t = 0; t < tx.num_elements; ++t)
        h.entries(r, t) += row * std::conj(a_tx.elements[t]);
    }
  }
  return h;
}

/// Per-sub-carrier matrices at offsets centered on the carrier and spanning
/// the bandwidth symmetrically; a single sub-carrier sits at offset zero.
inline std::vector<ChannelMatrix> subcarrier_sweep(const ChannelRealization& real,
                                                   const ArrayGeometry& tx, const ArrayGeometry& rx,
                                                   double bandwidth_hz, std::size_t num_subcarriers) {
  if (num_subcarriers < 1) throw std::domain_error("subcarrier_sweep: need at least one sub-carrier");
  std::vector<ChannelMatrix> out;
  out.reserve(num_subcarriers);
  if (num_subcarriers == 1) {
    out.push_back(realization_to_matrix(real, tx, rx, 0.0));
    return out;
  }
  const double step = bandwidth_hz / static_cast<double>(num_subcarriers - 1);
  for (std::size_t k = 0; k < num_subcarriers; ++k) {
    const double offset = -0.5 * bandwidth_hz + step * static_cast<double>(k);
    out.push_back(realization_to_matrix(real, tx, rx, offset));
  }
  return out;
}

/// Scale by 10^(delta_db / 20); beam selection must be invariant under this.
inline ChannelMatrix apply_tx_power(const ChannelMatrix& h, double delta_db) {
  ChannelMatrix out = h;
  out.entries *= std::pow(10.0, delta_db / 20.0);
  return out;
}

}  // namespace beamsim
