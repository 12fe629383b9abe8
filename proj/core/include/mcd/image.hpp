#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "mcd/error.hpp"

namespace mcd {

/// Dense row-major 2D array. Used for images, subbands, masks and edge maps.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}
  Grid(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
      throw StructureError("grid data length does not match width*height");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  const T& operator()(std::size_t x, std::size_t y) const {
    return data_[y * width_ + x];
  }

  std::span<T> row(std::size_t y) { return {data_.data() + y * width_, width_}; }
  std::span<const T> row(std::size_t y) const {
    return {data_.data() + y * width_, width_};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  std::vector<T>& storage() noexcept { return data_; }
  const std::vector<T>& storage() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
// uint8_t rather than bool: std::vector<bool> has no addressable elements.
using BinaryGrid = Grid<std::uint8_t>;

inline constexpr double kDefaultPixelPitchMm = 0.0435;

/// Real-valued grayscale image with source quantization metadata.
///
/// Intensities are stored as doubles straight from the file; nothing is
/// rescaled on load. All values must be finite.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(RealGrid pixels, int bit_depth,
            double pixel_pitch_mm = kDefaultPixelPitchMm);
  GrayImage(std::size_t width, std::size_t height, std::vector<double> data,
            int bit_depth, double pixel_pitch_mm = kDefaultPixelPitchMm);

  std::size_t width() const noexcept { return pixels_.width(); }
  std::size_t height() const noexcept { return pixels_.height(); }
  int bit_depth() const noexcept { return bit_depth_; }
  double pixel_pitch_mm() const noexcept { return pixel_pitch_mm_; }

  const RealGrid& pixels() const noexcept { return pixels_; }
  std::span<const double> data() const noexcept { return pixels_.values(); }
  double operator()(std::size_t x, std::size_t y) const { return pixels_(x, y); }

  /// Copy with the same metadata and new pixel values.
  GrayImage with_pixels(RealGrid pixels) const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  RealGrid pixels_;
  int bit_depth_ = 8;
  double pixel_pitch_mm_ = kDefaultPixelPitchMm;
};

/// Reads binary (P5) or ASCII (P2) PGM. bit_depth is ceil(log2(maxval+1)).
GrayImage load_pgm(const std::filesystem::path& path,
                   double pixel_pitch_mm = kDefaultPixelPitchMm);
GrayImage parse_pgm(std::span<const std::uint8_t> bytes,
                    double pixel_pitch_mm = kDefaultPixelPitchMm);

/// Writes P5 with maxval 2^bit_depth - 1; 16-bit samples are big-endian.
/// Pixels are rounded to the nearest integer and must fit the range.
void save_pgm(const GrayImage& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

/// Affine map of [min, max] onto [lo, hi]; a constant image maps to lo.
GrayImage normalize(const GrayImage& image, double lo, double hi);

/// Writes an arbitrary real grid as an 8-bit PGM after min/max scaling.
void save_grid_pgm(const RealGrid& grid, const std::filesystem::path& path);
/// Writes a binary grid as an 8-bit PGM with values 0/255.
void save_mask_pgm(const BinaryGrid& mask, const std::filesystem::path& path);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;

  Rgb& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  const Rgb& at(std::size_t x, std::size_t y) const {
    return pixels[y * width + x];
  }
};

struct OverlayCircle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

struct OverlayResult {
  RgbImage image;
  std::size_t drawn = 0;
  std::size_t skipped = 0;  // circles whose center lies outside the image
};

/// Pixel offsets (dx, dy) of the integer midpoint circle of radius r,
/// all eight octants, deduplicated, in a stable order.
std::vector<std::pair<int, int>> midpoint_circle(int radius);

/// Expands the image to gray RGB (intensity scaled by 255 / maxval of its bit
/// depth, clamped) and strokes each circle at its rounded center and radius
/// with a 1-pixel line. Pixels of a circle that fall off the image are clipped.
OverlayResult render_overlay(const GrayImage& image,
                             std::span<const OverlayCircle> circles,
                             Rgb color = {255, 0, 0});

/// Plain-header binary PPM (P6).
void save_ppm(const RgbImage& image, const std::filesystem::path& path);

}  // namespace mcd
