#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mcd/image.hpp"
#include "mcd/shell_clustering.hpp"

namespace mcd {

/// Seeded generator with a fixed, portable output sequence: std::mt19937_64
/// (its output is fully specified by the standard) with hand-written
/// transforms, since std distributions differ between library vendors.
///   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
///   normal()   = Box-Muller on two uniforms, both outputs used in order
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class TruthKind { kNodular, kLinear };

struct Truth {
  Point2 center;
  double radius = 0.0;  // nodules: disk radius; lines: half length
  TruthKind kind = TruthKind::kNodular;
  double angle = 0.0;   // lines only, radians
  double peak = 0.0;    // amplitude above the local background

  friend bool operator==(const Truth&, const Truth&) = default;
};

struct PhantomConfig {
  std::size_t width = 512;
  std::size_t height = 512;
  int nodules = 8;
  int lines = 4;
  double noise_sigma = 10.0;
  double pixel_pitch_mm = kDefaultPixelPitchMm;
  double base_level = 1000.0;
  double edge_sigma = 0.4;  // blur of the nodule rim, px
  int bit_depth = 12;

  void validate() const;
};

struct Phantom {
  GrayImage image;
  std::vector<Truth> truths;
  std::uint64_t seed = 0;
};

/// Background: base level plus 3 broad Gaussians at random positions.
/// Nodules: disks with a Gaussian-blurred rim, diameter uniform in
/// [0.3, 1.0] mm, peak uniform in [4, 8] x the contrast reference
/// (noise_sigma, or 10 when noise_sigma is 0), kept 20 px from the border and
/// from each other. Lines: Gaussian-profile segments 20-60 px long, same peak
/// range, kept 10 px clear of every nodule. White Gaussian noise is added
/// last and the result is rounded and clamped to bit_depth. Throws
/// GenerationError when a shape cannot be placed in 100 attempts.
Phantom generate_phantom(const PhantomConfig& config, std::uint64_t seed);
Phantom generate_phantom(std::size_t width, std::size_t height, int nodules, int lines,
                         double noise_sigma, std::uint64_t seed);

std::string truths_to_json(const Phantom& phantom);
std::vector<Truth> truths_from_json(std::string_view text);
void write_truths(const Phantom& phantom, const std::filesystem::path& path);
std::vector<Truth> read_truths(const std::filesystem::path& path);

}  // namespace mcd
