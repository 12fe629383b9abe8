#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "mcd/image.hpp"

namespace mcd {

/// Two-channel orthogonal filter bank. Analysis is a stride-2 correlation,
///   lo[k] = sum_n analysis_low[n] * x[2k + n],
/// and synthesis scatters each coefficient back through the synthesis taps,
///   x[2k + n] += lo[k] * synthesis_low[n] + hi[k] * synthesis_high[n],
/// so for an orthogonal bank the synthesis taps equal the analysis taps.
struct FilterBank {
  std::vector<double> analysis_low;
  std::vector<double> analysis_high;
  std::vector<double> synthesis_low;
  std::vector<double> synthesis_high;

  std::size_t length() const noexcept { return analysis_low.size(); }

  /// 4-tap Daubechies (two vanishing moments), closed-form coefficients.
  static FilterBank daubechies4();
};

struct DetailLevel {
  RealGrid lh;  // vertical low-pass, horizontal high-pass
  RealGrid hl;  // vertical high-pass, horizontal low-pass
  RealGrid hh;  // high-pass in both directions
};

struct Size2 {
  std::size_t width = 0;
  std::size_t height = 0;
  friend bool operator==(const Size2&, const Size2&) = default;
};

/// Detail subbands for levels 1..J (index 0 is the finest) plus the final
/// approximation. Decimated pyramids halve each axis per level (rounding up);
/// stationary pyramids keep every grid at the original size.
struct SubbandPyramid {
  std::vector<DetailLevel> levels;
  RealGrid approx;
  bool decimated = true;
  Size2 original_size;
};

/// Largest level count a decimated transform accepts for this size.
int max_decimated_levels(std::size_t width, std::size_t height);

/// Decimated separable 2D transform: columns (vertical) first, then rows,
/// periodic extension. An odd-length signal is first extended by repeating
/// its last sample, which keeps every level perfectly invertible.
SubbandPyramid dwt2_forward(const RealGrid& image, int levels,
                            const FilterBank& bank = FilterBank::daubechies4());
SubbandPyramid dwt2_forward(const GrayImage& image, int levels,
                            const FilterBank& bank = FilterBank::daubechies4());

RealGrid dwt2_inverse(const SubbandPyramid& pyramid,
                      const FilterBank& bank = FilterBank::daubechies4());

/// Undecimated (a trous) transform: level j correlates with taps spaced
/// 2^(j-1) apart under periodic extension. All subbands keep the input size.
SubbandPyramid swt2_forward(const RealGrid& image, int levels,
                            const FilterBank& bank = FilterBank::daubechies4());
SubbandPyramid swt2_forward(const GrayImage& image, int levels,
                            const FilterBank& bank = FilterBank::daubechies4());

inline constexpr double kDefaultGain = 1.2;

struct EnhanceOptions {
  double gain = kDefaultGain;
  bool zero_approximation = true;
};

/// Detail weighting: in each detail subband, coefficients whose magnitude is
/// at least that subband's population standard deviation are multiplied by
/// the gain; the rest are left alone. The final approximation is zeroed.
SubbandPyramid enhance(const SubbandPyramid& pyramid, const EnhanceOptions& options);
SubbandPyramid enhance(const SubbandPyramid& pyramid, double gain = kDefaultGain);

/// Forward transform, enhance, inverse. The output is zero-mean-ish and may
/// contain negative values; normalize before saving.
GrayImage enhance_image(const GrayImage& image, int levels,
                        const EnhanceOptions& options = {});

/// Writes each subband of the pyramid as a min/max-scaled 8-bit PGM:
/// level<j>_lh.pgm, level<j>_hl.pgm, level<j>_hh.pgm and approx.pgm.
void dump_pyramid(const SubbandPyramid& pyramid, const std::filesystem::path& dir);

}  // namespace mcd
