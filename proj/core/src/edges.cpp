#include "mcd/edges.hpp"

#include <algorithm>
#include <cmath>

namespace mcd {

namespace {

// Flood-fills the 8-connected component containing (sx, sy); `labels` doubles
// as the visited set (0 = unvisited, set pixels carry `label`).
std::vector<PixelPoint> flood(const BinaryGrid& set, Grid<int>& labels, int sx,
                              int sy, int label) {
  const int w = static_cast<int>(set.width());
  const int h = static_cast<int>(set.height());
  std::vector<PixelPoint> comp;
  std::vector<PixelPoint> stack{{sx, sy}};
  labels(sx, sy) = label;
  while (!stack.empty()) {
    const auto p = stack.back();
    stack.pop_back();
    comp.push_back(p);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = p.x + dx;
        const int ny = p.y + dy;
        if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        if (set(nx, ny) && labels(nx, ny) == 0) {
          labels(nx, ny) = label;
          stack.push_back({nx, ny});
        }
      }
    }
  }
  std::sort(comp.begin(), comp.end(), [](const PixelPoint& a, const PixelPoint& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return comp;
}

}  // namespace

RealGrid gradient_magnitude(const RealGrid& f) {
  const std::size_t w = f.width();
  const std::size_t h = f.height();
  if (w < 3 || h < 3) {
    throw ArgumentError("gradient_magnitude: image must be at least 3x3");
  }
  RealGrid out(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double gx;
      if (x == 0) {
        gx = f(1, y) - f(0, y);
      } else if (x == w - 1) {
        gx = f(x, y) - f(x - 1, y);
      } else {
        gx = 0.5 * (f(x + 1, y) - f(x - 1, y));
      }
      double gy;
      if (y == 0) {
        gy = f(x, 1) - f(x, 0);
      } else if (y == h - 1) {
        gy = f(x, y) - f(x, y - 1);
      } else {
        gy = 0.5 * (f(x, y + 1) - f(x, y - 1));
      }
      out(x, y) = std::abs(gx) + std::abs(gy);
    }
  }
  return out;
}

RealGrid gradient_magnitude(const GrayImage& image) {
  return gradient_magnitude(image.pixels());
}

BinaryGrid edge_map(const RealGrid& gradmag, const EdgePolicy& policy) {
  BinaryGrid out(gradmag.width(), gradmag.height(), 0);
  const auto v = gradmag.values();
  if (v.empty()) return out;
  double mean = 0.0;
  for (double g : v) mean += g;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double g : v) ss += (g - mean) * (g - mean);
  const double threshold =
      mean + policy.k * std::sqrt(ss / static_cast<double>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out.values()[i] = v[i] > threshold;
  return out;
}

std::vector<EdgeGroup> connected_groups(const BinaryGrid& edges, std::size_t min_size) {
  Grid<int> labels(edges.width(), edges.height(), 0);
  std::vector<EdgeGroup> groups;
  int next_label = 1;
  for (std::size_t y = 0; y < edges.height(); ++y) {
    for (std::size_t x = 0; x < edges.width(); ++x) {
      if (!edges(x, y) || labels(x, y) != 0) continue;
      auto comp = flood(edges, labels, static_cast<int>(x), static_cast<int>(y),
                        next_label++);
      if (comp.size() < min_size) continue;
      groups.push_back({std::move(comp), static_cast<int>(groups.size())});
    }
  }
  return groups;
}

std::vector<EdgeGroup> restrict_to_roi(const std::vector<EdgeGroup>& groups,
                                       const RoiMask& mask, std::size_t min_size) {
  const std::size_t w = mask.flags.width();
  const std::size_t h = mask.flags.height();
  std::vector<EdgeGroup> out;
  BinaryGrid kept(w, h, 0);
  Grid<int> labels(w, h, 0);
  for (const auto& g : groups) {
    std::vector<PixelPoint> inside;
    for (const auto& p : g.points) {
      if (p.x < 0 || p.y < 0 || static_cast<std::size_t>(p.x) >= w ||
          static_cast<std::size_t>(p.y) >= h) {
        throw StructureError("restrict_to_roi: group point outside the ROI mask");
      }
      if (mask.at(p.x, p.y)) inside.push_back(p);
    }
    if (inside.size() < min_size) continue;

    for (const auto& p : inside) kept(p.x, p.y) = 1;
    // Discover pieces in raster order of their first pixel.
    int label = 1;
    std::vector<std::vector<PixelPoint>> pieces;
    for (const auto& p : inside) {
      if (labels(p.x, p.y) != 0) continue;
      pieces.push_back(flood(kept, labels, p.x, p.y, label++));
    }
    for (auto& piece : pieces) {
      if (piece.size() >= min_size) {
        out.push_back({std::move(piece), static_cast<int>(out.size())});
      }
    }
    for (const auto& p : inside) {
      kept(p.x, p.y) = 0;
      labels(p.x, p.y) = 0;
    }
  }
  return out;
}

}  // namespace mcd
