#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mcd/image.hpp"

namespace mcd {

/// Third standardized moment with the (N-1) normalisation throughout:
///   sum (x - mean)^3 / ((N-1) * s^3),  s^2 = sum (x - mean)^2 / (N-1).
/// Returns 0 when s == 0. Throws ArgumentError for N < 2.
double skewness(std::span<const double> samples);

/// Excess kurtosis, same normalisation:
///   sum (x - mean)^4 / ((N-1) * s^4) - 3.
/// Returns 0 when s == 0. Throws ArgumentError for N < 2.
double kurtosis(std::span<const double> samples);

struct RoiConfig {
  double skew_threshold = 0.2;
  double kurt_threshold = 4.0;
  std::size_t window = 32;
  std::size_t stride = 16;

  void validate() const;
};

struct RoiMask {
  std::size_t width = 0;
  std::size_t height = 0;
  BinaryGrid flags;
  std::size_t window = 32;
  std::size_t stride = 16;
  std::size_t windows_total = 0;
  std::size_t windows_fired = 0;

  bool at(std::size_t x, std::size_t y) const { return flags(x, y) != 0; }
  std::size_t count() const;
};

/// Window origins along one axis: 0, stride, 2*stride, ... with a final
/// origin clamped to (extent - window) so the last window touches the border.
/// A window larger than the extent is shrunk to the extent.
std::vector<std::size_t> window_origins(std::size_t extent, std::size_t window,
                                        std::size_t stride);

/// Slides window x window squares over every band. A window fires when, on
/// at least one band, skewness > skew_threshold and kurtosis > kurt_threshold;
/// all its pixels are then set. All bands must share one shape.
RoiMask roi_mask(std::span<const RealGrid* const> bands, const RoiConfig& config);

/// The two-orientation form: horizontal and vertical detail images.
RoiMask roi_mask(const RealGrid& detail_h, const RealGrid& detail_v,
                 const RoiConfig& config);

}  // namespace mcd
