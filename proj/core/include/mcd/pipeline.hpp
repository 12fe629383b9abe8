#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcd/edges.hpp"
#include "mcd/image.hpp"
#include "mcd/roi.hpp"
#include "mcd/shell_clustering.hpp"
#include "mcd/validity.hpp"
#include "mcd/wavelet.hpp"

namespace mcd {

inline constexpr std::size_t kMinDetectSize = 64;

struct PipelineConfig {
  int levels = 0;      // decimated enhancement levels; 0 picks min(10, floor(log2 min dim))
  double gain = kDefaultGain;
  int roi_levels = 4;  // stationary levels 1..roi_levels feed the ROI test
  RoiConfig roi{.stride = 8};
  EdgePolicy edges{.k = 1.25};
  FcsConfig fcs;
  ValidityConfig validity;
  double pixel_pitch_mm = kDefaultPixelPitchMm;

  void validate() const;
  /// The level count actually used for an image of this size.
  int resolved_levels(std::size_t width, std::size_t height) const;
};

struct StageCounts {
  std::size_t roi_windows_total = 0;
  std::size_t roi_windows_fired = 0;
  std::size_t edge_pixels = 0;
  std::size_t edge_groups = 0;     // components of >= 5 pixels before the ROI filter
  std::size_t roi_groups = 0;      // pieces surviving the ROI filter
  std::size_t fits_attempted = 0;  // always equals roi_groups
  std::size_t fits_rejected_geometry = 0;  // collinear or degenerate groups
  std::size_t accepted = 0;

  friend bool operator==(const StageCounts&, const StageCounts&) = default;
};

struct DetectionReport {
  std::string source;
  std::size_t width = 0;
  std::size_t height = 0;
  PipelineConfig config;  // levels already resolved
  std::vector<Detection> detections;
  StageCounts counts;

  std::vector<Detection> accepted() const;
};

/// Optional side outputs of one run.
struct DetectDebug {
  std::optional<std::filesystem::path> dump_dir;   // intermediate images
  std::optional<std::filesystem::path> trace_dir;  // one FCS trace CSV per group
};

/// enhance -> stationary detail bands of the enhanced image -> ROI mask ->
/// edges of the enhanced image -> ROI restriction -> one shell fit per group
/// -> classification. Every fit is reported; rejected ones carry
/// accepted == false. Groups that cannot hold a circle are counted, not fitted.
/// Stage failures are rethrown as StageError naming the stage.
DetectionReport detect(const GrayImage& image, const PipelineConfig& config = {},
                       std::string source = {}, const DetectDebug& debug = {});

void write_fit_trace_csv(const std::vector<FitTraceRow>& trace,
                         const std::filesystem::path& path);

}  // namespace mcd
