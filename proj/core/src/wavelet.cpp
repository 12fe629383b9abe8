#include "mcd/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcd {

namespace {

// One analysis step on a (possibly odd) signal. The signal is extended to the
// even length 2*ceil(N/2) by repeating its last sample, then treated as
// periodic; lo/hi receive ceil(N/2) coefficients each.
void analyze(std::span<const double> x, std::span<double> lo, std::span<double> hi,
             const FilterBank& bank) {
  const std::size_t n = x.size();
  const std::size_t half = lo.size();
  const std::size_t period = 2 * half;
  const std::size_t taps = bank.length();
  const auto sample = [&](std::size_t i) { return x[std::min(i % period, n - 1)]; };
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t t = 0; t < taps; ++t) {
      const double s = sample(2 * k + t);
      a += bank.analysis_low[t] * s;
      d += bank.analysis_high[t] * s;
    }
    lo[k] = a;
    hi[k] = d;
  }
}

// Inverse of analyze(); writes the first out.size() samples of the period.
void synthesize(std::span<const double> lo, std::span<const double> hi,
                std::span<double> out, const FilterBank& bank,
                std::vector<double>& scratch) {
  const std::size_t half = lo.size();
  const std::size_t period = 2 * half;
  const std::size_t taps = bank.length();
  scratch.assign(period, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t t = 0; t < taps; ++t) {
      scratch[(2 * k + t) % period] +=
          lo[k] * bank.synthesis_low[t] + hi[k] * bank.synthesis_high[t];
    }
  }
  std::copy_n(scratch.begin(), out.size(), out.begin());
}

std::size_t half_up(std::size_t n) { return (n + 1) / 2; }

struct LevelOutput {
  RealGrid ll;
  DetailLevel detail;
};

LevelOutput analyze_level(const RealGrid& in, const FilterBank& bank) {
  const std::size_t w = in.width();
  const std::size_t h = in.height();
  const std::size_t hw = half_up(w);
  const std::size_t hh = half_up(h);

  // Vertical pass over columns.
  RealGrid vlo(w, hh), vhi(w, hh);
  std::vector<double> col(h), clo(hh), chi(hh);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y) col[y] = in(x, y);
    analyze(col, clo, chi, bank);
    for (std::size_t y = 0; y < hh; ++y) {
      vlo(x, y) = clo[y];
      vhi(x, y) = chi[y];
    }
  }

  // Horizontal pass over rows.
  LevelOutput out{RealGrid(hw, hh), {RealGrid(hw, hh), RealGrid(hw, hh), RealGrid(hw, hh)}};
  for (std::size_t y = 0; y < hh; ++y) {
    analyze(vlo.row(y), out.ll.row(y), out.detail.lh.row(y), bank);
    analyze(vhi.row(y), out.detail.hl.row(y), out.detail.hh.row(y), bank);
  }
  return out;
}

RealGrid synthesize_level(const RealGrid& ll, const DetailLevel& d, Size2 target,
                          const FilterBank& bank) {
  const std::size_t hh = ll.height();
  std::vector<double> scratch;

  RealGrid vlo(target.width, hh), vhi(target.width, hh);
  for (std::size_t y = 0; y < hh; ++y) {
    synthesize(ll.row(y), d.lh.row(y), vlo.row(y), bank, scratch);
    synthesize(d.hl.row(y), d.hh.row(y), vhi.row(y), bank, scratch);
  }

  RealGrid out(target.width, target.height);
  std::vector<double> clo(hh), chi(hh), col(target.height);
  for (std::size_t x = 0; x < target.width; ++x) {
    for (std::size_t y = 0; y < hh; ++y) {
      clo[y] = vlo(x, y);
      chi[y] = vhi(x, y);
    }
    synthesize(clo, chi, col, bank, scratch);
    for (std::size_t y = 0; y < target.height; ++y) out(x, y) = col[y];
  }
  return out;
}

// Periodic correlation with taps spaced `step` apart.
void correlate_periodic(std::span<const double> x, std::span<double> lo,
                        std::span<double> hi, std::size_t step,
                        const FilterBank& bank) {
  const std::size_t n = x.size();
  const std::size_t taps = bank.length();
  for (std::size_t m = 0; m < n; ++m) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t t = 0; t < taps; ++t) {
      const double s = x[(m + t * step) % n];
      a += bank.analysis_low[t] * s;
      d += bank.analysis_high[t] * s;
    }
    lo[m] = a;
    hi[m] = d;
  }
}

LevelOutput stationary_level(const RealGrid& in, std::size_t step,
                             const FilterBank& bank) {
  const std::size_t w = in.width();
  const std::size_t h = in.height();
  RealGrid vlo(w, h), vhi(w, h);
  std::vector<double> col(h), clo(h), chi(h);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y) col[y] = in(x, y);
    correlate_periodic(col, clo, chi, step, bank);
    for (std::size_t y = 0; y < h; ++y) {
      vlo(x, y) = clo[y];
      vhi(x, y) = chi[y];
    }
  }
  LevelOutput out{RealGrid(w, h), {RealGrid(w, h), RealGrid(w, h), RealGrid(w, h)}};
  for (std::size_t y = 0; y < h; ++y) {
    correlate_periodic(vlo.row(y), out.ll.row(y), out.detail.lh.row(y), step, bank);
    correlate_periodic(vhi.row(y), out.detail.hl.row(y), out.detail.hh.row(y), step, bank);
  }
  return out;
}

void require_shape(const RealGrid& g, Size2 s, const std::string& what) {
  if (g.width() != s.width || g.height() != s.height) {
    throw StructureError(what + " has shape " + std::to_string(g.width()) + "x" +
                         std::to_string(g.height()) + ", expected " +
                         std::to_string(s.width) + "x" + std::to_string(s.height));
  }
}

double population_stddev(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double c : v) mean += c;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double c : v) ss += (c - mean) * (c - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

void weight_subband(RealGrid& band, double gain) {
  const double threshold = population_stddev(band.values());
  for (double& c : band.values()) {
    if (std::abs(c) >= threshold) c *= gain;
  }
}

}  // namespace

FilterBank FilterBank::daubechies4() {
  const double s3 = std::sqrt(3.0);
  const double norm = 4.0 * std::sqrt(2.0);
  const std::vector<double> h = {(1.0 + s3) / norm, (3.0 + s3) / norm,
                                 (3.0 - s3) / norm, (1.0 - s3) / norm};
  // Quadrature mirror: g[n] = (-1)^n h[L-1-n].
  std::vector<double> g(h.size());
  for (std::size_t n = 0; n < h.size(); ++n) {
    g[n] = (n % 2 == 0 ? 1.0 : -1.0) * h[h.size() - 1 - n];
  }
  return {h, g, h, g};
}

int max_decimated_levels(std::size_t width, std::size_t height) {
  const std::size_t m = std::min(width, height);
  int levels = 0;
  while ((std::size_t{2} << levels) <= m) ++levels;
  return levels;
}

SubbandPyramid dwt2_forward(const RealGrid& image, int levels, const FilterBank& bank) {
  if (image.empty()) throw ArgumentError("dwt2_forward: empty image");
  if (levels < 1) throw ArgumentError("dwt2_forward: levels must be >= 1");
  const int max_levels = max_decimated_levels(image.width(), image.height());
  if (levels > max_levels) {
    throw ArgumentError("dwt2_forward: " + std::to_string(levels) +
                        " levels exceed the maximum of " + std::to_string(max_levels) +
                        " for a " + std::to_string(image.width()) + "x" +
                        std::to_string(image.height()) + " image");
  }
  SubbandPyramid pyr;
  pyr.decimated = true;
  pyr.original_size = {image.width(), image.height()};
  pyr.levels.reserve(static_cast<std::size_t>(levels));
  RealGrid current = image;
  for (int j = 0; j < levels; ++j) {
    auto out = analyze_level(current, bank);
    pyr.levels.push_back(std::move(out.detail));
    current = std::move(out.ll);
  }
  pyr.approx = std::move(current);
  return pyr;
}

SubbandPyramid dwt2_forward(const GrayImage& image, int levels, const FilterBank& bank) {
  return dwt2_forward(image.pixels(), levels, bank);
}

RealGrid dwt2_inverse(const SubbandPyramid& pyramid, const FilterBank& bank) {
  if (!pyramid.decimated) {
    throw StructureError("dwt2_inverse: pyramid is not decimated");
  }
  if (pyramid.levels.empty()) throw StructureError("dwt2_inverse: no levels");

  std::vector<Size2> sizes{pyramid.original_size};
  for (std::size_t j = 0; j < pyramid.levels.size(); ++j) {
    sizes.push_back({half_up(sizes.back().width), half_up(sizes.back().height)});
  }
  for (std::size_t j = 0; j < pyramid.levels.size(); ++j) {
    const auto& lvl = pyramid.levels[j];
    const std::string tag = "level " + std::to_string(j + 1);
    require_shape(lvl.lh, sizes[j + 1], tag + " LH");
    require_shape(lvl.hl, sizes[j + 1], tag + " HL");
    require_shape(lvl.hh, sizes[j + 1], tag + " HH");
  }
  require_shape(pyramid.approx, sizes.back(), "approximation");

  RealGrid current = pyramid.approx;
  for (std::size_t j = pyramid.levels.size(); j-- > 0;) {
    current = synthesize_level(current, pyramid.levels[j], sizes[j], bank);
  }
  return current;
}

SubbandPyramid swt2_forward(const RealGrid& image, int levels, const FilterBank& bank) {
  if (image.empty()) throw ArgumentError("swt2_forward: empty image");
  if (levels < 1) throw ArgumentError("swt2_forward: levels must be >= 1");
  if (levels > 30) throw ArgumentError("swt2_forward: too many levels");
  SubbandPyramid pyr;
  pyr.decimated = false;
  pyr.original_size = {image.width(), image.height()};
  RealGrid current = image;
  for (int j = 0; j < levels; ++j) {
    auto out = stationary_level(current, std::size_t{1} << j, bank);
    pyr.levels.push_back(std::move(out.detail));
    current = std::move(out.ll);
  }
  pyr.approx = std::move(current);
  return pyr;
}

SubbandPyramid swt2_forward(const GrayImage& image, int levels, const FilterBank& bank) {
  return swt2_forward(image.pixels(), levels, bank);
}

SubbandPyramid enhance(const SubbandPyramid& pyramid, const EnhanceOptions& options) {
  if (!(options.gain > 0.0) || !std::isfinite(options.gain)) {
    throw ArgumentError("enhance: gain must be positive");
  }
  if (!pyramid.decimated) {
    throw ArgumentError("enhance: expects a decimated pyramid");
  }
  SubbandPyramid out = pyramid;
  for (auto& lvl : out.levels) {
    weight_subband(lvl.lh, options.gain);
    weight_subband(lvl.hl, options.gain);
    weight_subband(lvl.hh, options.gain);
  }
  if (options.zero_approximation) {
    std::fill(out.approx.values().begin(), out.approx.values().end(), 0.0);
  }
  return out;
}

SubbandPyramid enhance(const SubbandPyramid& pyramid, double gain) {
  return enhance(pyramid, EnhanceOptions{gain, true});
}

GrayImage enhance_image(const GrayImage& image, int levels, const EnhanceOptions& options) {
  const auto pyr = dwt2_forward(image, levels);
  return image.with_pixels(dwt2_inverse(enhance(pyr, options)));
}

void dump_pyramid(const SubbandPyramid& pyramid, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t j = 0; j < pyramid.levels.size(); ++j) {
    const auto stem = "level" + std::to_string(j + 1);
    save_grid_pgm(pyramid.levels[j].lh, dir / (stem + "_lh.pgm"));
    save_grid_pgm(pyramid.levels[j].hl, dir / (stem + "_hl.pgm"));
    save_grid_pgm(pyramid.levels[j].hh, dir / (stem + "_hh.pgm"));
  }
  save_grid_pgm(pyramid.approx, dir / "approx.pgm");
}

}  // namespace mcd
