// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "beamsim/array.hpp"
#include "beamsim/beamstats.hpp"
#include "beamsim/beamtrain.hpp"
#include "beamsim/channel.hpp"
#include "beamsim/specdecomp.hpp"

namespace beamsim {

struct SubcarrierCheck {
  double bandwidth_hz = 800e6;
  std::size_t count = 1600;
};

/// Full description of one Monte Carlo experiment. run_begin exists so an
/// experiment can be split into disjoint shards whose merge is bit-identical
/// to a monolithic run.
struct ExperimentSpec {
  ScenarioConfig scenario;
  ArrayGeometry tx_geom{256, 0.5};
  ArrayGeometry rx_geom{16, 0.5};
  std::size_t n_runs = 1;
  std::uint64_t master_seed = 1;
  std::vector<double> tx_power_deltas_db{0.0};
  std::optional<SubcarrierCheck> subcarrier_check;
  std::size_t entropy_trace_stride = 500;
  std::size_t run_begin = 0;
};

inline void validate(const ExperimentSpec& s) {
  validate(s.scenario);
  validate(s.tx_geom);
  validate(s.rx_geom);
  if (s.n_runs < 1) throw std::invalid_argument("experiment: n_runs must be >= 1");
  if (s.entropy_trace_stride < 1)
    throw std::invalid_argument("experiment: entropy_trace_stride must be >= 1");
}

/// Spec equality modulo the run range; shards must agree on everything else.
inline bool compatible_for_merge(const ExperimentSpec& a, const ExperimentSpec& b) {
  const ScenarioConfig &x = a.scenario, &y = b.scenario;
  return x.kind == y.kind && x.carrier_ghz == y.carrier_ghz && x.bs_height_m == y.bs_height_m &&
         x.ut_height_m == y.ut_height_m && x.min_dist_2d_m == y.min_dist_2d_m &&
         x.max_dist_2d_m == y.max_dist_2d_m && x.tx_power_dbm == y.tx_power_dbm &&
         x.path_loss_exponent == y.path_loss_exponent && x.shadow_sigma_db == y.shadow_sigma_db &&
         x.k_factor_db == y.k_factor_db && x.max_clusters == y.max_clusters &&
         x.cluster_decay_db == y.cluster_decay_db && x.delay_spread_ns == y.delay_spread_ns &&
         x.aod_sector_half_deg == y.aod_sector_half_deg &&
         x.aoa_range_half_deg == y.aoa_range_half_deg &&
         a.tx_geom.num_elements == b.tx_geom.num_elements &&
         a.tx_geom.spacing_wavelengths == b.tx_geom.spacing_wavelengths &&
         a.rx_geom.num_elements == b.rx_geom.num_elements &&
         a.rx_geom.spacing_wavelengths == b.rx_geom.spacing_wavelengths &&
         a.master_seed == b.master_seed && a.tx_power_deltas_db == b.tx_power_deltas_db &&
         a.entropy_trace_stride == b.entropy_trace_stride;
}

/// Per-run outcome, indexed by absolute run number. Holding these makes
/// shard merges exact: the merged result is re-finalized from the union.
struct RunRecord {
  std::uint32_t rx_beam = 0;
  std::uint32_t tx_beam = 0;
  std::uint8_t degenerate = 0;
  std::uint32_t effective_rank = 0;
  std::uint32_t power_violations = 0;
  double sigma1 = 0.0;
  double sigma_ratio = 0.0;  // sigma2 / sigma1; 0 when min dim is 1
};

struct TracePoint {
  std::uint64_t run_count = 0;
  double rx_entropy_bits = 0.0;
  double tx_entropy_bits = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RunRecord> records;  // records[k] is run (spec.run_begin + k)

  BeamHistogram tx_hist, rx_hist;
  EntropyReport tx_entropy, rx_entropy;
  double joint_entropy_bits = 0.0;
  struct RankSummary {
    double mean_effective_rank = 0.0;
    double max_sigma_ratio = 0.0;
  } rank_summary;
  std::vector<TracePoint> entropy_trace;
  struct ProbeMetrics {
    double tx = 0.0;
    double rx = 0.0;
  } probe_metrics;
  std::uint64_t power_invariance_violations = 0;
  std::uint64_t degenerate_count = 0;
};

namespace detail {

inline RunRecord simulate_run(const ExperimentSpec& spec, const Codebook& tx_cb,
                              const Codebook& rx_cb, std::uint64_t run_index) {
  SplitMix64 rng = substream(spec.master_seed, run_index);
  const ChannelRealization real = draw_realization(spec.scenario, rng);
  const ChannelMatrix h = realization_to_matrix(real, spec.tx_geom, spec.rx_geom, 0.0);
  const BeamSelection sel = select_best(sweep(h, tx_cb, rx_cb));

  RunRecord rec;
  rec.rx_beam = static_cast<std::uint32_t>(sel.rx_beam);
  rec.tx_beam = static_cast<std::uint32_t>(sel.tx_beam);
  rec.degenerate = sel.degenerate ? 1 : 0;

  const SvdReport svd = analyze(h.entries);
  rec.effective_rank = static_cast<std::uint32_t>(svd.effective_rank);
  rec.sigma1 = svd.singular_values.front();
  if (svd.singular_values.size() > 1 && rec.sigma1 > 0.0)
    rec.sigma_ratio = svd.singular_values[1] / rec.sigma1;

  for (double delta : spec.tx_power_deltas_db) {
    if (delta == 0.0) continue;
    const BeamSelection scaled = select_best(sweep(apply_tx_power(h, delta), tx_cb, rx_cb));
    if (scaled.rx_beam != sel.rx_beam || scaled.tx_beam != sel.tx_beam) ++rec.power_violations;
  }
  return rec;
}

/// Sequential pass over the records: histograms, trace, entropies, probes.
inline void finalize(ExperimentResult& res) {
  const std::size_t nt = res.spec.tx_geom.num_elements;
  const std::size_t nr = res.spec.rx_geom.num_elements;
  res.tx_hist = BeamHistogram(nt);
  res.rx_hist = BeamHistogram(nr);
  std::vector<std::uint64_t> joint(nr * nt, 0);
  res.entropy_trace.clear();
  res.power_invariance_violations = 0;
  res.degenerate_count = 0;

  double sum_eff_rank = 0.0;
  double max_ratio = 0.0;
  std::uint64_t rank_samples = 0;

  const std::size_t stride = res.spec.entropy_trace_stride;
  for (std::size_t k = 0; k < res.records.size(); ++k) {
    const RunRecord& rec = res.records[k];
    if (rec.degenerate) {
      ++res.degenerate_count;
    } else {
      accumulate(res.rx_hist, rec.rx_beam);
      accumulate(res.tx_hist, rec.tx_beam);
      ++joint[static_cast<std::size_t>(rec.rx_beam) * nt + rec.tx_beam];
      sum_eff_rank += static_cast<double>(rec.effective_rank);
      max_ratio = std::max(max_ratio, rec.sigma_ratio);
      ++rank_samples;
    }
    res.power_invariance_violations += rec.power_violations;

    const std::size_t done = k + 1;
    if (done % stride == 0 || done == res.records.size()) {
      TracePoint tp;
      tp.run_count = done;
      tp.rx_entropy_bits = res.rx_hist.total > 0 ? entropy(to_pmf(res.rx_hist)) : 0.0;
      tp.tx_entropy_bits = res.tx_hist.total > 0 ? entropy(to_pmf(res.tx_hist)) : 0.0;
      res.entropy_trace.push_back(tp);
    }
  }

  res.rx_entropy = make_entropy_report(res.rx_hist);
  res.tx_entropy = make_entropy_report(res.tx_hist);

  res.joint_entropy_bits = 0.0;
  const std::uint64_t joint_total = res.rx_hist.total;
  if (joint_total > 0) {
    const double inv = 1.0 / static_cast<double>(joint_total);
    for (std::uint64_t c : joint) {
      if (c == 0) continue;
      const double p = static_cast<double>(c) * inv;
      res.joint_entropy_bits -= p * std::log2(p);
    }
  }

  res.rank_summary.mean_effective_rank =
      rank_samples > 0 ? sum_eff_rank / static_cast<double>(rank_samples) : 0.0;
  res.rank_summary.max_sigma_ratio = max_ratio;

  res.probe_metrics.rx = res.rx_hist.total > 0 ? expected_probe_count(to_pmf(res.rx_hist)) : 0.0;
  res.probe_metrics.tx = res.tx_hist.total > 0 ? expected_probe_count(to_pmf(res.tx_hist)) : 0.0;
}

}  // namespace detail

/// Run the experiment. Results are bit-identical for any thread count:
/// every run draws from its own (master_seed, run_index) substream into a
/// preassigned slot, and aggregation is a single sequential pass.
inline ExperimentResult run(const ExperimentSpec& spec, std::size_t n_threads = 0) {
  validate(spec);
  const Codebook tx_cb = dft_codebook(spec.tx_geom);
  const Codebook rx_cb = dft_codebook(spec.rx_geom);

  ExperimentResult res;
  res.spec = spec;
  res.records.resize(spec.n_runs);

  std::size_t threads = n_threads ? n_threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, spec.n_runs);

  if (threads == 1) {
    for (std::size_t k = 0; k < spec.n_runs; ++k)
      res.records[k] = detail::simulate_run(spec, tx_cb, rx_cb, spec.run_begin + k);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (spec.n_runs + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(spec.n_runs, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t k = lo; k < hi; ++k)
          res.records[k] = detail::simulate_run(spec, tx_cb, rx_cb, spec.run_begin + k);
      });
    }
    for (auto& th : pool) th.join();
  }

  detail::finalize(res);
  return res;
}

/// Merge shard results over disjoint run ranges that tile one contiguous
/// span. Histograms add elementwise; everything else is re-finalized from
/// the union of per-run records, so a merged result is bit-identical to the
/// equivalent monolithic run.
inline ExperimentResult merge(const ExperimentResult& a, const ExperimentResult& b) {
  if (b.records.empty()) return a;
  if (a.records.empty()) return b;
  if (!compatible_for_merge(a.spec, b.spec))
    throw std::domain_error("merge: experiment specs differ beyond the run range");

  const std::size_t a_lo = a.spec.run_begin, a_hi = a_lo + a.records.size();
  const std::size_t b_lo = b.spec.run_begin, b_hi = b_lo + b.records.size();
  if (a_lo < b_hi && b_lo < a_hi) throw std::domain_error("merge: run ranges overlap");
  if (a_hi != b_lo && b_hi != a_lo)
    throw std::domain_error("merge: run ranges must tile a contiguous span");

  const ExperimentResult& first = (a_lo < b_lo) ? a : b;
  const ExperimentResult& second = (a_lo < b_lo) ? b : a;

  ExperimentResult out;
  out.spec = first.spec;
  out.spec.n_runs = first.records.size() + second.records.size();
  out.records = first.records;
  out.records.insert(out.records.end(), second.records.begin(), second.records.end());
  detail::finalize(out);
  return out;
}

struct SubcarrierReport {
  double max_rel_sigma1_spread = 0.0;
  std::vector<double> per_subcarrier_sigma1;
};

/// sigma_1 across the sub-carrier grid, referenced to the carrier (offset 0).
inline SubcarrierReport subcarrier_consistency(const ExperimentSpec& spec,
                                               const ChannelRealization& realization) {
  if (!spec.subcarrier_check) throw std::domain_error("subcarrier_consistency: no subcarrier_check in spec");
  const SubcarrierCheck& sc = *spec.subcarrier_check;

  const ChannelMatrix center = realization_to_matrix(realization, spec.tx_geom, spec.rx_geom, 0.0);
  const double ref = singular_values(center.entries).front();
  if (!(ref > 0.0)) throw std::domain_error("subcarrier_consistency: zero reference channel");

  SubcarrierReport rep;
  const std::vector<ChannelMatrix> sweep_mats =
      subcarrier_sweep(realization, spec.tx_geom, spec.rx_geom, sc.bandwidth_hz, sc.count);
  rep.per_subcarrier_sigma1.reserve(sweep_mats.size());
  for (const ChannelMatrix& m : sweep_mats) {
    const double s1 = singular_values(m.entries).front();
    rep.per_subcarrier_sigma1.push_back(s1);
    rep.max_rel_sigma1_spread = std::max(rep.max_rel_sigma1_spread, std::abs(s1 - ref) / ref);
  }
  return rep;
}

}  // namespace beamsim
