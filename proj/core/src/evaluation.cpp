#include "mcd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace mcd {

MatchResult match_detections(std::span<const Detection> detections,
                             std::span<const Truth> truths,
                             std::optional<double> tolerance_px) {
  if (tolerance_px && !(*tolerance_px > 0.0)) {
    throw ArgumentError("match tolerance must be > 0");
  }
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  std::size_t nodular = 0;
  for (std::size_t j = 0; j < truths.size(); ++j) {
    const auto& t = truths[j];
    if (t.kind != TruthKind::kNodular) continue;
    ++nodular;
    const double tol = tolerance_px ? *tolerance_px : t.radius + kMatchSlackPx;
    for (std::size_t i = 0; i < detections.size(); ++i) {
      const double d = std::hypot(detections[i].center.x - t.center.x,
                                  detections[i].center.y - t.center.y);
      if (d <= tol) candidates.emplace_back(d, i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end());

  MatchResult out;
  std::vector<bool> det_used(detections.size(), false);
  std::vector<bool> truth_used(truths.size(), false);
  for (const auto& [d, i, j] : candidates) {
    if (det_used[i] || truth_used[j]) continue;
    det_used[i] = true;
    truth_used[j] = true;
    out.pairs.emplace_back(i, j);
  }
  out.tp = out.pairs.size();
  out.fp = detections.size() - out.tp;
  out.fn = nodular - out.tp;
  return out;
}

std::vector<OperatingPoint> default_sweep() {
  constexpr double kScales[] = {0.0, 0.25, 0.5, 0.7, 0.8, 0.9, 1.0, 1.1,
                                1.25, 1.5, 2.0, 3.0, 100.0};
  std::vector<OperatingPoint> out;
  for (double s : kScales) {
    out.push_back({1.15 * s, s == 0.0 ? std::numeric_limits<double>::infinity() : 0.2 / s});
  }
  return out;
}

std::vector<FrocPoint> froc_curve(std::span<const EvaluatedCase> cases,
                                  std::span<const OperatingPoint> sweep) {
  if (cases.empty()) throw ArgumentError("froc_curve: no reports given");
  std::size_t nodular = 0;
  for (const auto& c : cases) {
    nodular += static_cast<std::size_t>(
        std::count_if(c.truths.begin(), c.truths.end(),
                      [](const Truth& t) { return t.kind == TruthKind::kNodular; }));
  }
  if (nodular == 0) throw ArgumentError("froc_curve: batch has no nodular truths");

  std::vector<FrocPoint> curve;
  for (const auto& op : sweep) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (const auto& c : cases) {
      ValidityConfig v = c.report.config.validity;
      v.cd_threshold = op.cd;
      v.rst_threshold = op.rst;
      std::vector<Detection> kept;
      for (const auto& d : c.report.detections) {
        if (passes(d.cluster_density, d.shell_thickness, d.radius, v,
                   c.report.config.pixel_pitch_mm)) {
          kept.push_back(d);
        }
      }
      const auto m = match_detections(kept, c.truths);
      tp += m.tp;
      fp += m.fp;
    }
    curve.push_back({double(fp) / double(cases.size()), double(tp) / double(nodular), op.cd,
                     op.rst});
  }
  std::sort(curve.begin(), curve.end(), [](const FrocPoint& a, const FrocPoint& b) {
    return std::tie(a.fp_per_image, a.tp_ratio) < std::tie(b.fp_per_image, b.tp_ratio);
  });
  return curve;
}

}  // namespace mcd
