#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mcd/phantom.hpp"
#include "mcd/pipeline.hpp"

namespace mcd {

inline constexpr double kMatchSlackPx = 3.0;

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (detection, truth) indices
};

/// Greedy one-to-one matching, closest pair first, between detections and the
/// nodular truths. A pair qualifies when the center distance is at most the
/// tolerance: tolerance_px if given, else the truth radius + 3 px. Linear
/// truths never match. Equal distances are broken by detection then truth index.
MatchResult match_detections(std::span<const Detection> detections,
                             std::span<const Truth> truths,
                             std::optional<double> tolerance_px = std::nullopt);

struct OperatingPoint {
  double cd = 1.15;
  double rst = 0.2;
};

struct FrocPoint {
  double fp_per_image = 0.0;
  double tp_ratio = 0.0;
  double cd = 0.0;
  double rst = 0.0;
};

struct EvaluatedCase {
  DetectionReport report;
  std::vector<Truth> truths;
};

/// Nested thresholds from loosest (cd 0, rst inf) to a point that rejects
/// everything; each pair is (1.15 s, 0.2 / s) and s = 1 is included.
std::vector<OperatingPoint> default_sweep();

/// Re-classifies every stored fit at each operating point (radius gate and
/// pitch from the report's config), matches, and returns one point per sweep
/// entry sorted by (fp_per_image, tp_ratio). Throws ArgumentError on an empty
/// batch or a batch without nodular truths.
std::vector<FrocPoint> froc_curve(std::span<const EvaluatedCase> cases,
                                  std::span<const OperatingPoint> sweep);

}  // namespace mcd
