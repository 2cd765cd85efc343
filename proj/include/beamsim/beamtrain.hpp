// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "beamsim/array.hpp"
#include "beamsim/beamstats.hpp"
#include "beamsim/channel.hpp"

namespace beamsim {

/// |w_i^H H f_j| for the full Rx x Tx beam grid.
struct GainMatrix {
  std::size_t rows = 0;  // Rx beams
  std::size_t cols = 0;  // Tx beams
  std::vector<double> values;  // row-major

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// Winner of one exhaustive sweep. degenerate marks an all-zero gain grid
/// (possible only for ingested zero matrices); such runs are excluded from
/// histograms rather than counted as beam (0, 0).
struct BeamSelection {
  std::size_t tx_beam = 0;
  std::size_t rx_beam = 0;
  double gain = 0.0;
  bool degenerate = false;
};

/// Exhaustive RF beam training: entrywise modulus of W_rx^H H W_tx.
inline GainMatrix sweep(const ChannelMatrix& h, const Codebook& tx_cb, const Codebook& rx_cb) {
  if (rx_cb.size() != h.entries.rows() || tx_cb.size() != h.entries.cols())
    throw std::domain_error("sweep: codebook dimensions do not match channel matrix");
  const CMatrix g = adjoint_times(rx_cb.weights, h.entries) * tx_cb.weights;
  GainMatrix gm;
  gm.rows = g.rows();
  gm.cols = g.cols();
  gm.values.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gm.values[i] = std::abs(g.data()[i]);
  return gm;
}

/// Argmax over the grid; ties break toward the lowest rx then tx index.
inline BeamSelection select_best(const GainMatrix& gm) {
  if (gm.values.empty()) throw std::domain_error("select_best: empty gain matrix");
  BeamSelection sel;
  double best = -1.0;
  for (std::size_t i = 0; i < gm.rows; ++i) {
    for (std::size_t j = 0; j < gm.cols; ++j) {
      const double v = gm(i, j);
      if (v > best) {
        best = v;
        sel.rx_beam = i;
        sel.tx_beam = j;
      }
    }
  }
  sel.gain = best;
  sel.degenerate = (best <= 0.0);
  return sel;
}

/// Mean probe count when beams are tested in descending-probability order:
/// sum_k (k+1) * p_(k). Uniform beams give (N+1)/2, a point mass gives 1.
inline double expected_probe_count(const BeamPmf& pmf) {
  if (pmf.probs.empty()) throw std::domain_error("expected_probe_count: empty pmf");
  double total = 0.0;
  for (double p : pmf.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("expected_probe_count: probability out of [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::domain_error("expected_probe_count: pmf does not sum to 1");
  std::vector<double> sorted = pmf.probs;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double mean = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) mean += static_cast<double>(k + 1) * sorted[k];
  return mean;
}

}  // namespace beamsim
