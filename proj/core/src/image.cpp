#include "mcd/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>

namespace mcd {

namespace {

void check_finite(std::span<const double> data) {
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw RangeError("image intensities must be finite");
    }
  }
}

int bit_depth_for_maxval(unsigned maxval) {
  int bits = 0;
  while ((1u << bits) - 1u < maxval) ++bits;
  return std::max(bits, 8);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

// Netpbm header/ASCII-raster tokenizer; '#' starts a comment to end of line.
class Tokenizer {
 public:
  Tokenizer(std::span<const std::uint8_t> bytes, std::size_t start)
      : bytes_(bytes), pos_(start) {}

  std::size_t offset() const noexcept { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_unsigned(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<unsigned>::max()) {
        throw ParseError(std::string("numeric overflow reading ") + what, start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError(std::string("expected ") + what, start);
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from a binary raster.
  void consume_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError("expected whitespace after maxval", pos_);
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage::GrayImage(RealGrid pixels, int bit_depth, double pixel_pitch_mm)
    : pixels_(std::move(pixels)),
      bit_depth_(bit_depth),
      pixel_pitch_mm_(pixel_pitch_mm) {
  if (pixels_.width() == 0 || pixels_.height() == 0) {
    throw ArgumentError("image dimensions must be positive");
  }
  if (bit_depth_ < 1 || bit_depth_ > 16) {
    throw ArgumentError("bit depth must lie in 1..16");
  }
  if (!(pixel_pitch_mm_ > 0.0) || !std::isfinite(pixel_pitch_mm_)) {
    throw ArgumentError("pixel pitch must be positive");
  }
  check_finite(pixels_.values());
}

GrayImage::GrayImage(std::size_t width, std::size_t height,
                     std::vector<double> data, int bit_depth,
                     double pixel_pitch_mm)
    : GrayImage(RealGrid(width, height, std::move(data)), bit_depth,
                pixel_pitch_mm) {}

GrayImage GrayImage::with_pixels(RealGrid pixels) const {
  return GrayImage(std::move(pixels), bit_depth_, pixel_pitch_mm_);
}

GrayImage parse_pgm(std::span<const std::uint8_t> bytes, double pixel_pitch_mm) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("not a P2/P5 PGM file", 0);
  }
  const bool binary = bytes[1] == '5';
  Tokenizer tok(bytes, 2);
  const auto at = [&] { return tok.offset(); };

  const auto width = tok.read_unsigned("width");
  const auto height = tok.read_unsigned("height");
  const std::size_t maxval_offset = at();
  const auto maxval = tok.read_unsigned("maxval");
  if (width == 0 || height == 0) {
    throw ParseError("zero image dimension", maxval_offset);
  }
  if (maxval == 0) throw ParseError("maxval must be positive", maxval_offset);
  if (maxval > 65535) {
    throw UnsupportedFormatError("PGM maxval " + std::to_string(maxval) +
                                 " exceeds 65535");
  }

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> data(count);
  if (binary) {
    tok.consume_single_space();
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    std::size_t pos = at();
    if (bytes.size() < pos + count * bytes_per_sample) {
      throw ParseError("raster truncated", bytes.size());
    }
    for (std::size_t i = 0; i < count; ++i) {
      unsigned v = bytes[pos++];
      if (bytes_per_sample == 2) v = (v << 8) | bytes[pos++];
      if (v > maxval) throw ParseError("sample exceeds maxval", pos - bytes_per_sample);
      data[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t off = at();
      const auto v = tok.read_unsigned("sample");
      if (v > maxval) throw ParseError("sample exceeds maxval", off);
      data[i] = static_cast<double>(v);
    }
  }
  return GrayImage(width, height, std::move(data),
                   bit_depth_for_maxval(static_cast<unsigned>(maxval)),
                   pixel_pitch_mm);
}

GrayImage load_pgm(const std::filesystem::path& path, double pixel_pitch_mm) {
  const auto bytes = read_file(path);
  try {
    return parse_pgm(bytes, pixel_pitch_mm);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
  const unsigned maxval = (1u << image.bit_depth()) - 1u;
  std::ostringstream header;
  header << "P5\n" << image.width() << ' ' << image.height() << '\n' << maxval << '\n';
  const std::string h = header.str();

  const bool wide = maxval > 255;
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.reserve(h.size() + image.data().size() * (wide ? 2 : 1));
  for (double v : image.data()) {
    const double r = std::round(v);
    if (r < 0.0 || r > maxval) {
      throw RangeError("intensity " + std::to_string(v) + " outside [0, " +
                       std::to_string(maxval) + "]; normalize first");
    }
    const auto s = static_cast<unsigned>(r);
    if (wide) out.push_back(static_cast<std::uint8_t>(s >> 8));
    out.push_back(static_cast<std::uint8_t>(s & 0xFF));
  }
  return out;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
  write_file(path, encode_pgm(image));
}

GrayImage normalize(const GrayImage& image, double lo, double hi) {
  if (!(hi > lo)) throw ArgumentError("normalize requires hi > lo");
  const auto [mn, mx] = std::minmax_element(image.data().begin(), image.data().end());
  const double min = *mn;
  const double range = *mx - min;
  RealGrid out(image.width(), image.height(), lo);
  if (range > 0.0) {
    const double scale = (hi - lo) / range;
    auto src = image.data();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = lo + (src[i] - min) * scale;
    }
    // Pin the extremes so the endpoints are exact despite rounding.
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == *mx) dst[i] = hi;
    }
  }
  return image.with_pixels(std::move(out));
}

void save_grid_pgm(const RealGrid& grid, const std::filesystem::path& path) {
  const GrayImage img(grid, 8);
  const auto scaled = normalize(img, 0.0, 255.0);
  save_pgm(scaled, path);
}

void save_mask_pgm(const BinaryGrid& mask, const std::filesystem::path& path) {
  RealGrid g(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    g.values()[i] = mask.values()[i] ? 255.0 : 0.0;
  }
  save_pgm(GrayImage(std::move(g), 8), path);
}

std::vector<std::pair<int, int>> midpoint_circle(int radius) {
  std::vector<std::pair<int, int>> pts;
  if (radius < 0) return pts;
  int x = 0;
  int y = radius;
  int d = 1 - radius;
  while (x <= y) {
    const std::pair<int, int> octant[] = {{x, y},   {y, x},   {-x, y}, {-y, x},
                                          {x, -y},  {y, -x},  {-x, -y}, {-y, -x}};
    pts.insert(pts.end(), std::begin(octant), std::end(octant));
    ++x;
    if (d < 0) {
      d += 2 * x + 1;
    } else {
      --y;
      d += 2 * (x - y) + 1;
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

OverlayResult render_overlay(const GrayImage& image,
                             std::span<const OverlayCircle> circles, Rgb color) {
  OverlayResult result;
  RgbImage& rgb = result.image;
  rgb.width = image.width();
  rgb.height = image.height();
  rgb.pixels.resize(rgb.width * rgb.height);
  const double maxval = std::ldexp(1.0, image.bit_depth()) - 1.0;
  const auto data = image.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = std::clamp(std::round(data[i] * 255.0 / maxval), 0.0, 255.0);
    const auto g = static_cast<std::uint8_t>(v);
    rgb.pixels[i] = {g, g, g};
  }

  const auto w = static_cast<long>(rgb.width);
  const auto h = static_cast<long>(rgb.height);
  for (const auto& c : circles) {
    if (!(c.cx >= 0.0 && c.cy >= 0.0 && c.cx <= w - 1 && c.cy <= h - 1) ||
        !std::isfinite(c.radius) || c.radius < 0.0) {
      ++result.skipped;
      continue;
    }
    const long cx = std::lround(c.cx);
    const long cy = std::lround(c.cy);
    for (const auto& [dx, dy] : midpoint_circle(static_cast<int>(std::lround(c.radius)))) {
      const long x = cx + dx;
      const long y = cy + dy;
      if (x >= 0 && y >= 0 && x < w && y < h) {
        rgb.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = color;
      }
    }
    ++result.drawn;
  }
  return result;
}

void save_ppm(const RgbImage& image, const std::filesystem::path& path) {
  std::ostringstream header;
  header << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.reserve(h.size() + image.pixels.size() * 3);
  for (const auto& p : image.pixels) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  write_file(path, out);
}

}  // namespace mcd
