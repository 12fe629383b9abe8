#pragma once

#include "mcd/image.hpp"
#include "mcd/shell_clustering.hpp"

namespace mcd {

struct ValidityConfig {
  double cd_threshold = 1.15;
  double rst_threshold = 0.2;
  double min_radius_mm = 0.15;
  double max_radius_mm = 0.5;
  double characteristic_cutoff = 0.5;

  void validate() const;
};

/// One classified shell fit. Rejected fits are kept with accepted == false.
struct Detection {
  Point2 center;
  double radius = 0.0;
  double cluster_density = 0.0;
  double shell_thickness = 0.0;
  bool accepted = false;
  int group_id = 0;
  int iterations = 0;
  bool converged = false;
};

/// Sum of memberships above the cutoff divided by the circumference 2*pi*r.
double cluster_density(const ShellFit& fit, const ValidityConfig& config = {});

/// sum u^m D^2 / (r * sum u^m). Throws DegenerateFitError for zero membership
/// mass and ArgumentError for r <= 0.
double relative_shell_thickness(const ShellFit& fit);

/// The acceptance rule alone, for re-thresholding stored detections.
bool passes(double cluster_density, double shell_thickness, double radius_px,
            const ValidityConfig& config, double pixel_pitch_mm);

Detection classify(const ShellFit& fit, const ValidityConfig& config,
                   double pixel_pitch_mm = kDefaultPixelPitchMm, int group_id = 0);

}  // namespace mcd
