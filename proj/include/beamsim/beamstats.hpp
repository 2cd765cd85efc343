// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "beamsim/array.hpp"

namespace beamsim {

/// Beam-selection counts for one codebook side.
struct BeamHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  BeamHistogram() = default;
  explicit BeamHistogram(std::size_t n_beams) : counts(n_beams, 0) {}

  std::size_t n_beams() const { return counts.size(); }
};

inline void accumulate(BeamHistogram& hist, std::size_t beam_index) {
  if (beam_index >= hist.counts.size()) throw std::domain_error("accumulate: beam index out of range");
  ++hist.counts[beam_index];
  ++hist.total;
}

/// Elementwise count addition; order of merges never changes the result.
inline BeamHistogram merge(const BeamHistogram& a, const BeamHistogram& b) {
  if (a.counts.size() != b.counts.size()) throw std::domain_error("merge: histogram sizes differ");
  BeamHistogram out = a;
  for (std::size_t i = 0; i < b.counts.size(); ++i) out.counts[i] += b.counts[i];
  out.total += b.total;
  return out;
}

struct BeamPmf {
  std::vector<double> probs;

  std::size_t n_beams() const { return probs.size(); }
};

inline BeamPmf to_pmf(const BeamHistogram& hist) {
  if (hist.total == 0) throw std::domain_error("to_pmf: empty histogram");
  BeamPmf pmf;
  pmf.probs.resize(hist.counts.size());
  const double inv = 1.0 / static_cast<double>(hist.total);
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    pmf.probs[i] = static_cast<double>(hist.counts[i]) * inv;
  return pmf;
}

/// Shannon entropy in bits, with the 0 log 0 = 0 convention. Terms are
/// accumulated in sorted order, so the result is exactly independent of
/// how the beams happen to be indexed.
inline double entropy(const BeamPmf& pmf) {
  std::vector<double> nonzero;
  nonzero.reserve(pmf.probs.size());
  for (double p : pmf.probs)
    if (p > 0.0) nonzero.push_back(p);
  std::sort(nonzero.begin(), nonzero.end());
  double h = 0.0;
  for (double p : nonzero) h -= p * std::log2(p);
  return h;
}

/// Published-value form: entropy_bits / log2(N).
inline double relative_entropy(double entropy_bits, std::size_t n_beams) {
  if (n_beams < 2) throw std::domain_error("relative_entropy: undefined for fewer than 2 beams");
  return entropy_bits / std::log2(static_cast<double>(n_beams));
}

/// Base-invariant randomness indicator in [0, 1].
inline double relative_entropy(const BeamPmf& pmf) {
  return relative_entropy(entropy(pmf), pmf.n_beams());
}

/// Entropy summary for one codebook side.
struct EntropyReport {
  double entropy_bits = 0.0;
  double max_entropy_bits = 0.0;  // log2(N)
  double relative_entropy = 0.0;  // entropy / log2(N), N > 1
  std::size_t n_beams = 0;
  std::uint64_t n_samples = 0;
};

inline EntropyReport make_entropy_report(const BeamHistogram& hist) {
  EntropyReport rep;
  rep.n_beams = hist.n_beams();
  rep.n_samples = hist.total;
  rep.entropy_bits = hist.total > 0 ? entropy(to_pmf(hist)) : 0.0;
  rep.max_entropy_bits = std::log2(static_cast<double>(rep.n_beams));
  rep.relative_entropy = rep.n_beams > 1 ? rep.entropy_bits / rep.max_entropy_bits : 0.0;
  return rep;
}

/// Exact beam PMF for a direction uniform in angle over [-90, 90] at
/// half-wavelength spacing: the arcsine law mapped onto the DFT beam grid.
/// Beam m covers [psi_m - 1/N, psi_m + 1/N) around psi_m = wrap(2m/N); the
/// beam at psi = -1 collects both tails |psi| > 1 - 1/N, which is what the
/// selection argmax actually does at the edge of visible space.
inline BeamPmf arcsine_pmf_oracle(std::size_t n_beams) {
  if (n_beams < 2 || (n_beams % 2) != 0)
    throw std::domain_error("arcsine_pmf_oracle: n_beams must be even and >= 2");
  BeamPmf pmf;
  pmf.probs.resize(n_beams, 0.0);
  const double half_bin = 1.0 / static_cast<double>(n_beams);
  for (std::size_t m = 0; m < n_beams; ++m) {
    const double psi = wrap_spatial_freq(2.0 * static_cast<double>(m) / static_cast<double>(n_beams));
    if (m == n_beams / 2) {
      // psi = -1: wrap-around beam
      pmf.probs[m] = 2.0 * (kPi / 2.0 - std::asin(1.0 - half_bin)) / kPi;
    } else {
      pmf.probs[m] = (std::asin(psi + half_bin) - std::asin(psi - half_bin)) / kPi;
    }
  }
  return pmf;
}

}  // namespace beamsim
