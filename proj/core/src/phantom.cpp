#include "mcd/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mcd {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kMaxAttempts = 100;
constexpr double kBorderMargin = 20.0;
constexpr double kNoduleGap = 20.0;
constexpr double kLineMargin = 40.0;
constexpr double kLineClearance = 10.0;
constexpr double kLineSigma = 0.8;

double segment_distance(double px, double py, double cx, double cy, double dx, double dy,
                        double half) {
  const double t = std::clamp((px - cx) * dx + (py - cy) * dy, -half, half);
  return std::hypot(px - cx - t * dx, py - cy - t * dy);
}

struct Box {
  std::size_t x0, y0, x1, y1;  // half-open
};

Box clip_box(double cx, double cy, double reach, std::size_t w, std::size_t h) {
  auto lo = [](double v) { return static_cast<std::size_t>(std::max(0.0, std::floor(v))); };
  auto hi = [](double v, std::size_t n) {
    return static_cast<std::size_t>(std::clamp(std::ceil(v) + 1.0, 0.0, double(n)));
  };
  return {lo(cx - reach), lo(cy - reach), hi(cx + reach, w), hi(cy + reach, h)};
}

const char* kind_name(TruthKind k) { return k == TruthKind::kNodular ? "nodular" : "linear"; }

}  // namespace

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return mag * std::cos(2.0 * std::numbers::pi * u2);
}

void PhantomConfig::validate() const {
  if (width < 256 || height < 256) throw ArgumentError("phantom must be at least 256x256");
  if (nodules < 0 || lines < 0) throw ArgumentError("phantom counts must be >= 0");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ArgumentError("noise_sigma must be >= 0");
  }
  if (!(pixel_pitch_mm > 0.0)) throw ArgumentError("pixel_pitch_mm must be > 0");
  if (!(edge_sigma >= 0.0)) throw ArgumentError("edge_sigma must be >= 0");
  if (bit_depth < 8 || bit_depth > 16) throw ArgumentError("bit_depth must lie in 8..16");
}

Phantom generate_phantom(const PhantomConfig& config, std::uint64_t seed) {
  config.validate();
  const std::size_t w = config.width;
  const std::size_t h = config.height;
  const double fw = static_cast<double>(w);
  const double fh = static_cast<double>(h);
  Rng rng(seed);
  RealGrid img(w, h, config.base_level);

  const double scale = std::min(fw, fh) / 512.0;
  for (int i = 0; i < 3; ++i) {
    const double cx = rng.uniform(0.0, fw);
    const double cy = rng.uniform(0.0, fh);
    const double s = rng.uniform(80.0, 160.0) * scale;
    const double a = rng.uniform(20.0, 60.0);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double dx = double(x) - cx;
        const double dy = double(y) - cy;
        img(x, y) += a * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
      }
    }
  }

  const double contrast = config.noise_sigma > 0.0 ? config.noise_sigma : 10.0;
  Phantom ph;
  ph.seed = seed;

  for (int n = 0; n < config.nodules; ++n) {
    Truth t;
    t.kind = TruthKind::kNodular;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      t.radius = rng.uniform(0.15, 0.5) / config.pixel_pitch_mm;
      const double m = t.radius + kBorderMargin;
      t.center = {rng.uniform(m, fw - m), rng.uniform(m, fh - m)};
      placed = std::all_of(ph.truths.begin(), ph.truths.end(), [&](const Truth& o) {
        return std::hypot(t.center.x - o.center.x, t.center.y - o.center.y) >
               t.radius + o.radius + kNoduleGap;
      });
    }
    if (!placed) {
      throw GenerationError("could not place nodule " + std::to_string(n) + " in " +
                            std::to_string(kMaxAttempts) + " attempts");
    }
    t.peak = rng.uniform(4.0, 8.0) * contrast;
    const double reach = t.radius + 6.0 * config.edge_sigma + 2.0;
    const auto box = clip_box(t.center.x, t.center.y, reach, w, h);
    for (std::size_t y = box.y0; y < box.y1; ++y) {
      for (std::size_t x = box.x0; x < box.x1; ++x) {
        const double d = std::hypot(double(x) - t.center.x, double(y) - t.center.y);
        double f;
        if (config.edge_sigma > 0.0) {
          f = 0.5 * std::erfc((d - t.radius) / (std::numbers::sqrt2 * config.edge_sigma));
        } else {
          f = d <= t.radius ? 1.0 : 0.0;
        }
        img(x, y) += t.peak * f;
      }
    }
    ph.truths.push_back(t);
  }
  const std::size_t n_nodules = ph.truths.size();

  for (int n = 0; n < config.lines; ++n) {
    Truth t;
    t.kind = TruthKind::kLinear;
    bool placed = false;
    double dx = 1.0, dy = 0.0;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      t.radius = 0.5 * rng.uniform(20.0, 60.0);
      t.angle = rng.uniform(0.0, std::numbers::pi);
      t.center = {rng.uniform(kLineMargin, fw - kLineMargin),
                  rng.uniform(kLineMargin, fh - kLineMargin)};
      dx = std::cos(t.angle);
      dy = std::sin(t.angle);
      placed = std::all_of(ph.truths.begin(), ph.truths.begin() + n_nodules,
                           [&](const Truth& o) {
                             return segment_distance(o.center.x, o.center.y, t.center.x,
                                                     t.center.y, dx, dy, t.radius) >
                                    o.radius + kLineClearance;
                           });
    }
    if (!placed) {
      throw GenerationError("could not place line " + std::to_string(n) + " in " +
                            std::to_string(kMaxAttempts) + " attempts");
    }
    t.peak = rng.uniform(4.0, 8.0) * contrast;
    const auto box = clip_box(t.center.x, t.center.y, t.radius + 5.0 * kLineSigma, w, h);
    for (std::size_t y = box.y0; y < box.y1; ++y) {
      for (std::size_t x = box.x0; x < box.x1; ++x) {
        const double d =
            segment_distance(double(x), double(y), t.center.x, t.center.y, dx, dy, t.radius);
        img(x, y) += t.peak * std::exp(-d * d / (2.0 * kLineSigma * kLineSigma));
      }
    }
    ph.truths.push_back(t);
  }

  const double maxval = std::ldexp(1.0, config.bit_depth) - 1.0;
  for (double& v : img.values()) {
    if (config.noise_sigma > 0.0) v += config.noise_sigma * rng.normal();
    v = std::clamp(std::round(v), 0.0, maxval);
  }
  ph.image = GrayImage(std::move(img), config.bit_depth, config.pixel_pitch_mm);
  return ph;
}

Phantom generate_phantom(std::size_t width, std::size_t height, int nodules, int lines,
                         double noise_sigma, std::uint64_t seed) {
  PhantomConfig c;
  c.width = width;
  c.height = height;
  c.nodules = nodules;
  c.lines = lines;
  c.noise_sigma = noise_sigma;
  return generate_phantom(c, seed);
}

std::string truths_to_json(const Phantom& phantom) {
  Json doc;
  doc["seed"] = phantom.seed;
  doc["width"] = phantom.image.width();
  doc["height"] = phantom.image.height();
  doc["pixel_pitch_mm"] = phantom.image.pixel_pitch_mm();
  Json arr = Json::array();
  for (const auto& t : phantom.truths) {
    arr.push_back({{"kind", kind_name(t.kind)},
                   {"x", t.center.x},
                   {"y", t.center.y},
                   {"radius", t.radius},
                   {"angle", t.angle},
                   {"peak", t.peak}});
  }
  doc["truths"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::vector<Truth> truths_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("truth file: ") + e.what(), e.byte);
  }
  std::vector<Truth> out;
  try {
    for (const auto& item : doc.at("truths")) {
      Truth t;
      const auto kind = item.at("kind").get<std::string>();
      if (kind == "nodular") {
        t.kind = TruthKind::kNodular;
      } else if (kind == "linear") {
        t.kind = TruthKind::kLinear;
      } else {
        throw StructureError("truth file: unknown kind '" + kind + "'");
      }
      t.center = {item.at("x").get<double>(), item.at("y").get<double>()};
      t.radius = item.at("radius").get<double>();
      t.angle = item.value("angle", 0.0);
      t.peak = item.value("peak", 0.0);
      out.push_back(t);
    }
  } catch (const Json::exception& e) {
    throw StructureError(std::string("truth file: ") + e.what());
  }
  return out;
}

void write_truths(const Phantom& phantom, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << truths_to_json(phantom);
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Truth> read_truths(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return truths_from_json(ss.str());
}

}  // namespace mcd
