#include "mcd/roi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcd {

namespace {

struct Moments {
  double m3 = 0.0;  // sum of cubed deviations / (N-1)
  double m4 = 0.0;
  double s = 0.0;   // sample standard deviation
};

Moments central_moments(std::span<const double> x) {
  if (x.size() < 2) {
    throw ArgumentError("skewness/kurtosis need at least 2 samples");
  }
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  return {s3 / (n - 1.0), s4 / (n - 1.0), std::sqrt(s2 / (n - 1.0))};
}

}  // namespace

double skewness(std::span<const double> samples) {
  const auto m = central_moments(samples);
  if (m.s == 0.0) return 0.0;
  return m.m3 / (m.s * m.s * m.s);
}

double kurtosis(std::span<const double> samples) {
  const auto m = central_moments(samples);
  if (m.s == 0.0) return 0.0;
  const double s2 = m.s * m.s;
  return m.m4 / (s2 * s2) - 3.0;
}

void RoiConfig::validate() const {
  if (!std::isfinite(skew_threshold) || !std::isfinite(kurt_threshold)) {
    throw ArgumentError("ROI thresholds must be finite");
  }
  if (window < 2) throw ArgumentError("ROI window must be >= 2");
  if (stride < 1 || stride > window) {
    throw ArgumentError("ROI stride must lie in [1, window]");
  }
}

std::size_t RoiMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(flags.values().begin(), flags.values().end(),
                    [](std::uint8_t f) { return f != 0; }));
}

std::vector<std::size_t> window_origins(std::size_t extent, std::size_t window,
                                        std::size_t stride) {
  const std::size_t w = std::min(window, extent);
  std::vector<std::size_t> origins;
  for (std::size_t o = 0; o + w <= extent; o += stride) origins.push_back(o);
  if (origins.empty() || origins.back() + w < extent) origins.push_back(extent - w);
  return origins;
}

RoiMask roi_mask(std::span<const RealGrid* const> bands, const RoiConfig& config) {
  config.validate();
  if (bands.empty()) throw ArgumentError("roi_mask: no detail bands given");
  const std::size_t width = bands.front()->width();
  const std::size_t height = bands.front()->height();
  for (const auto* b : bands) {
    if (b->width() != width || b->height() != height) {
      throw StructureError("roi_mask: detail bands differ in shape");
    }
  }

  RoiMask mask;
  mask.width = width;
  mask.height = height;
  mask.flags = BinaryGrid(width, height, 0);
  mask.window = config.window;
  mask.stride = config.stride;

  const std::size_t ww = std::min(config.window, width);
  const std::size_t wh = std::min(config.window, height);
  const auto xs = window_origins(width, config.window, config.stride);
  const auto ys = window_origins(height, config.window, config.stride);

  std::vector<double> buf(ww * wh);
  for (std::size_t oy : ys) {
    for (std::size_t ox : xs) {
      ++mask.windows_total;
      bool fired = false;
      for (const auto* band : bands) {
        std::size_t i = 0;
        for (std::size_t y = oy; y < oy + wh; ++y) {
          const auto row = band->row(y);
          for (std::size_t x = ox; x < ox + ww; ++x) buf[i++] = row[x];
        }
        if (buf.size() < 2) continue;
        if (skewness(buf) > config.skew_threshold &&
            kurtosis(buf) > config.kurt_threshold) {
          fired = true;
          break;
        }
      }
      if (!fired) continue;
      ++mask.windows_fired;
      for (std::size_t y = oy; y < oy + wh; ++y) {
        for (std::size_t x = ox; x < ox + ww; ++x) mask.flags(x, y) = 1;
      }
    }
  }
  return mask;
}

RoiMask roi_mask(const RealGrid& detail_h, const RealGrid& detail_v,
                 const RoiConfig& config) {
  const RealGrid* bands[] = {&detail_h, &detail_v};
  return roi_mask(std::span<const RealGrid* const>(bands), config);
}

}  // namespace mcd
