#include "mcd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <utility>

namespace mcd {

namespace {

template <typename F>
auto run_stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (levels < 0) throw ArgumentError("levels must be >= 1 (or 0 for automatic)");
  if (!(gain > 0.0) || !std::isfinite(gain)) throw ArgumentError("gain must be > 0");
  if (roi_levels < 1) throw ArgumentError("roi_levels must be >= 1");
  if (!std::isfinite(edges.k)) throw ArgumentError("edge k must be finite");
  if (!(pixel_pitch_mm > 0.0) || !std::isfinite(pixel_pitch_mm)) {
    throw ArgumentError("pixel_pitch_mm must be > 0");
  }
  roi.validate();
  fcs.validate();
  validity.validate();
}

int PipelineConfig::resolved_levels(std::size_t width, std::size_t height) const {
  const int cap = max_decimated_levels(width, height);
  if (levels == 0) return std::min(10, cap);
  if (levels > cap) {
    throw ArgumentError("levels " + std::to_string(levels) + " exceed the maximum " +
                        std::to_string(cap) + " for this image");
  }
  return levels;
}

std::vector<Detection> DetectionReport::accepted() const {
  std::vector<Detection> out;
  std::copy_if(detections.begin(), detections.end(), std::back_inserter(out),
               [](const Detection& d) { return d.accepted; });
  return out;
}

void write_fit_trace_csv(const std::vector<FitTraceRow>& trace,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace " + path.string());
  out << "iteration,objective,center_x,center_y,radius\n" << std::setprecision(17);
  for (const auto& row : trace) {
    out << row.iteration << ',' << row.objective << ',' << row.prototype.center.x << ','
        << row.prototype.center.y << ',' << row.prototype.radius << '\n';
  }
  if (!out) throw IoError("failed writing trace " + path.string());
}

DetectionReport detect(const GrayImage& image, const PipelineConfig& config,
                       std::string source, const DetectDebug& debug) {
  if (image.width() < kMinDetectSize || image.height() < kMinDetectSize) {
    throw ArgumentError("detect needs an image of at least 64x64");
  }
  config.validate();

  DetectionReport report;
  report.source = std::move(source);
  report.width = image.width();
  report.height = image.height();
  report.config = config;
  report.config.levels = config.resolved_levels(image.width(), image.height());

  const auto enhanced = run_stage("enhance", [&] {
    return enhance_image(image, report.config.levels, EnhanceOptions{config.gain, true});
  });

  const auto mask = run_stage("roi", [&] {
    const auto pyr = swt2_forward(enhanced.pixels(), config.roi_levels);
    std::vector<const RealGrid*> bands;
    for (const auto& level : pyr.levels) {
      bands.push_back(&level.lh);
      bands.push_back(&level.hl);
    }
    return roi_mask(bands, config.roi);
  });
  report.counts.roi_windows_total = mask.windows_total;
  report.counts.roi_windows_fired = mask.windows_fired;

  const auto edges = run_stage("edges", [&] {
    return edge_map(gradient_magnitude(enhanced.pixels()), config.edges);
  });
  report.counts.edge_pixels = static_cast<std::size_t>(
      std::count(edges.values().begin(), edges.values().end(), std::uint8_t{1}));

  const auto all_groups = run_stage("groups", [&] { return connected_groups(edges); });
  report.counts.edge_groups = all_groups.size();
  const auto groups = run_stage("roi_filter", [&] { return restrict_to_roi(all_groups, mask); });
  report.counts.roi_groups = groups.size();

  if (debug.dump_dir) {
    std::filesystem::create_directories(*debug.dump_dir);
    save_grid_pgm(enhanced.pixels(), *debug.dump_dir / "enhanced.pgm");
    save_mask_pgm(mask.flags, *debug.dump_dir / "roi.pgm");
    save_mask_pgm(edges, *debug.dump_dir / "edges.pgm");
  }
  if (debug.trace_dir) std::filesystem::create_directories(*debug.trace_dir);

  run_stage("fit", [&] {
    for (const auto& group : groups) {
      ++report.counts.fits_attempted;
      std::vector<FitTraceRow> trace;
      try {
        const auto fit = fit_shell(group, config.fcs, debug.trace_dir ? &trace : nullptr);
        auto det = classify(fit, config.validity, config.pixel_pitch_mm, group.id);
        report.counts.accepted += det.accepted ? 1 : 0;
        report.detections.push_back(det);
      } catch (const UnderdeterminedFitError&) {
        ++report.counts.fits_rejected_geometry;
      } catch (const DegenerateFitError&) {
        ++report.counts.fits_rejected_geometry;
      }
      if (debug.trace_dir && !trace.empty()) {
        write_fit_trace_csv(trace, *debug.trace_dir /
                                       ("fcs_group" + std::to_string(group.id) + ".csv"));
      }
    }
  });
  return report;
}

}  // namespace mcd
