#pragma once

#include <cstddef>
#include <vector>

#include "mcd/image.hpp"
#include "mcd/roi.hpp"

namespace mcd {

struct PixelPoint {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const PixelPoint&, const PixelPoint&) = default;
};

/// 8-connected set of edge pixels. Points are kept in raster order.
struct EdgeGroup {
  std::vector<PixelPoint> points;
  int id = 0;
};

inline constexpr std::size_t kMinGroupSize = 5;

/// |Gx| + |Gy| with central differences inside and one-sided differences on
/// the border. Requires width and height >= 3.
RealGrid gradient_magnitude(const RealGrid& image);
RealGrid gradient_magnitude(const GrayImage& image);

/// Global statistical binarisation: a pixel is an edge iff its gradient
/// magnitude exceeds mean + k * stddev (population) of the whole map.
struct EdgePolicy {
  double k = 2.0;
};

BinaryGrid edge_map(const RealGrid& gradmag, const EdgePolicy& policy = {});

/// 8-connected components of set pixels in raster discovery order; components
/// smaller than min_size are dropped and ids are reassigned 0, 1, 2, ...
std::vector<EdgeGroup> connected_groups(const BinaryGrid& edges,
                                        std::size_t min_size = kMinGroupSize);

/// Drops points outside the mask, re-splits each group into its remaining
/// 8-connected pieces, and discards pieces below min_size. Ids are reassigned
/// in order.
std::vector<EdgeGroup> restrict_to_roi(const std::vector<EdgeGroup>& groups,
                                       const RoiMask& mask,
                                       std::size_t min_size = kMinGroupSize);

}  // namespace mcd
