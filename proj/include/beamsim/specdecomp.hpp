// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "beamsim/cmatrix.hpp"

namespace beamsim {

/// Default effective-rank threshold: sigma_k >= 1e-2 * sigma_1 (-40 dB).
constexpr double kDefaultRankThreshold = 1e-2;

/// Reporting floor for sigma_min / sigma_1; condition numbers clamp at 180 dB,
/// below the precision of the Gram route anyway.
constexpr double kConditionFloor = 1e-9;

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
/// Converged when every off-diagonal magnitude is below 1e-12 * ||A||_F.
/// Returns eigenvalues in descending order.
inline std::vector<double> hermitian_eigenvalues(CMatrix a) {
  if (a.rows() != a.cols()) throw std::domain_error("hermitian_eigenvalues: matrix not square");
  const std::size_t n = a.rows();
  std::vector<double> eig(n);
  if (n == 0) return eig;
  if (n == 1) {
    eig[0] = a(0, 0).real();
    return eig;
  }

  const double tol = 1e-12 * a.frobenius_norm();
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= tol) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cxd apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= tol * 1e-3) continue;

        // Factor the phase out of a_pq, then a real Jacobi rotation on the
        // remaining symmetric 2x2 block (Golub & Van Loan sym.schur2).
        const cxd phase = apq / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // U(p,p)=c, U(p,q)=s, U(q,p)=-s e^{-i phi}, U(q,q)=c e^{-i phi};
        // apply A <- U^H A U as column then row updates.
        const cxd se_m = s * std::conj(phase);
        const cxd ce_m = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cxd akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - se_m * akq;
          a(k, q) = s * akp + ce_m * akq;
        }
        const cxd se_p = s * phase;
        const cxd ce_p = c * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const cxd apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - se_p * aqk;
          a(q, k) = s * apk + ce_p * aqk;
        }
        a(p, q) = cxd(0.0, 0.0);
        a(q, p) = cxd(0.0, 0.0);
        a(p, p) = cxd(a(p, p).real(), 0.0);
        a(q, q) = cxd(a(q, q).real(), 0.0);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end(), std::greater<double>());
  return eig;
}

/// Singular values of H, descending, length min(rows, cols). Computed from
/// the eigenvalues of the smaller Gram matrix (H H^H when rows <= cols);
/// the artifact never needs singular vectors.
inline std::vector<double> singular_values(const CMatrix& h) {
  if (h.empty()) throw std::domain_error("singular_values: empty matrix");
  if (!h.all_finite()) throw std::domain_error("singular_values: non-finite entries");

  CMatrix gram;
  if (h.rows() <= h.cols()) {
    // H H^H, computed directly to keep it exactly Hermitian.
    const std::size_t n = h.rows(), m = h.cols();
    gram = CMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        cxd acc(0.0, 0.0);
        for (std::size_t k = 0; k < m; ++k) acc += h(i, k) * std::conj(h(j, k));
        gram(i, j) = acc;
        gram(j, i) = std::conj(acc);
      }
      gram(i, i) = cxd(gram(i, i).real(), 0.0);
    }
  } else {
    const std::size_t n = h.cols(), m = h.rows();
    gram = CMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        cxd acc(0.0, 0.0);
        for (std::size_t k = 0; k < m; ++k) acc += std::conj(h(k, i)) * h(k, j);
        gram(i, j) = acc;
        gram(j, i) = std::conj(acc);
      }
      gram(i, i) = cxd(gram(i, i).real(), 0.0);
    }
  }

  std::vector<double> lam = hermitian_eigenvalues(std::move(gram));
  std::vector<double> sv(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) sv[i] = std::sqrt(std::max(lam[i], 0.0));
  return sv;
}

/// Singular-value diagnostics for one channel matrix.
struct SvdReport {
  std::vector<double> singular_values;  // descending
  double condition_number_db = 0.0;     // 20 log10(s1 / max(s_min, s1 * floor))
  std::size_t effective_rank = 0;       // count of s_k >= threshold * s1
  double threshold = kDefaultRankThreshold;
  bool degenerate = false;  // zero matrix: rank 0, condition undefined
};

inline SvdReport analyze(const CMatrix& h, double threshold = kDefaultRankThreshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::domain_error("analyze: threshold must be in (0, 1)");
  SvdReport rep;
  rep.threshold = threshold;
  rep.singular_values = singular_values(h);
  const double s1 = rep.singular_values.front();
  if (s1 <= 0.0) {
    rep.degenerate = true;
    rep.effective_rank = 0;
    rep.condition_number_db = 0.0;
    return rep;
  }
  const double s_min = rep.singular_values.back();
  rep.condition_number_db = 20.0 * std::log10(s1 / std::max(s_min, s1 * kConditionFloor));
  for (double s : rep.singular_values)
    if (s >= threshold * s1) ++rep.effective_rank;
  return rep;
}

}  // namespace beamsim
