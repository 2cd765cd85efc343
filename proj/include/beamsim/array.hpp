// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamsim/cmatrix.hpp"

namespace beamsim {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kDegToRad = kPi / 180.0;

/// Uniform linear array: element count and pitch in carrier wavelengths.
struct ArrayGeometry {
  std::size_t num_elements = 0;
  double spacing_wavelengths = 0.5;
};

inline void validate(const ArrayGeometry& g) {
  if (g.num_elements < 1) throw std::invalid_argument("ArrayGeometry: num_elements must be >= 1");
  if (!(g.spacing_wavelengths > 0.0))
    throw std::invalid_argument("ArrayGeometry: spacing_wavelengths must be > 0");
}

/// ULA response for one physical direction. Elements are unit-magnitude
/// phasors; normalization lives in the codebook columns instead, so the
/// array gain at a beam's own MRA comes out as sqrt(N).
struct SteeringVector {
  std::vector<cxd> elements;
  double angle_deg = 0.0;
};

/// Spatial frequency of a physical direction: psi = 2 * d * sin(theta).
/// With half-wavelength spacing psi = sin(theta) and the DFT beam grid
/// spans [-1, 1).
inline double spatial_freq(const ArrayGeometry& g, double angle_deg) {
  return 2.0 * g.spacing_wavelengths * std::sin(angle_deg * kDegToRad);
}

/// Wrap a spatial frequency into the principal interval [-1, 1).
inline double wrap_spatial_freq(double psi) {
  double w = std::fmod(psi + 1.0, 2.0);
  if (w < 0.0) w += 2.0;
  return w - 1.0;
}

inline SteeringVector steering_vector(const ArrayGeometry& geom, double angle_deg) {
  validate(geom);
  if (!(angle_deg >= -90.0 && angle_deg <= 90.0))
    throw std::domain_error("steering_vector: angle must be in [-90, 90] degrees");
  SteeringVector sv;
  sv.angle_deg = angle_deg;
  sv.elements.resize(geom.num_elements);
  const double step = 2.0 * kPi * geom.spacing_wavelengths * std::sin(angle_deg * kDegToRad);
  for (std::size_t k = 0; k < geom.num_elements; ++k)
    sv.elements[k] = std::polar(1.0, step * static_cast<double>(k));
  return sv;
}

/// N x N DFT beamforming codebook. Columns are unit-norm beams; at the
/// main response axis of any beam every other beam has a null.
struct Codebook {
  CMatrix weights;                      // column m = beam m
  std::vector<double> beam_spatial_freq;  // psi_m in [-1, 1)

  std::size_t size() const { return weights.cols(); }
};

inline Codebook dft_codebook(const ArrayGeometry& geom) {
  validate(geom);
  const std::size_t n = geom.num_elements;
  Codebook cb;
  cb.weights = CMatrix(n, n);
  cb.beam_spatial_freq.resize(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t m = 0; m < n; ++m) {
    cb.beam_spatial_freq[m] = wrap_spatial_freq(2.0 * static_cast<double>(m) / static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const double phase = 2.0 * kPi * static_cast<double>(k) * static_cast<double>(m) / static_cast<double>(n);
      cb.weights(k, m) = std::polar(inv_sqrt_n, phase);
    }
  }
  return cb;
}

/// Physical angle of beam m's main response axis, in degrees. Only defined
/// when the beam center maps back inside visible space (|psi| <= 2d).
inline double beam_center_angle_deg(const ArrayGeometry& geom, std::size_t beam) {
  validate(geom);
  if (beam >= geom.num_elements) throw std::domain_error("beam_center_angle_deg: beam index out of range");
  const double psi = wrap_spatial_freq(2.0 * static_cast<double>(beam) / static_cast<double>(geom.num_elements));
  const double s = psi / (2.0 * geom.spacing_wavelengths);
  if (s < -1.0 || s > 1.0)
    throw std::domain_error("beam_center_angle_deg: beam center outside visible space");
  return std::asin(s) / kDegToRad;
}

/// |w_beam^H . direction|: array gain of one codebook beam toward a direction.
inline double beam_gain(const Codebook& cb, std::size_t beam, const SteeringVector& direction) {
  const std::size_t n = cb.size();
  if (beam >= n) throw std::domain_error("beam_gain: beam index out of range");
  if (direction.elements.size() != n)
    throw std::domain_error("beam_gain: direction length does not match codebook");
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cxd w = std::conj(cb.weights(k, beam));
    const cxd v = direction.elements[k];
    re += w.real() * v.real() - w.imag() * v.imag();
    im += w.real() * v.imag() + w.imag() * v.real();
  }
  return std::hypot(re, im);
}

}  // namespace beamsim
