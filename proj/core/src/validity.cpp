#include "mcd/validity.hpp"

#include <cmath>
#include <numbers>

namespace mcd {

void ValidityConfig::validate() const {
  if (!(cd_threshold > 0.0) || !(rst_threshold > 0.0)) {
    throw ArgumentError("validity thresholds must be positive");
  }
  if (!(min_radius_mm > 0.0) || !(min_radius_mm < max_radius_mm)) {
    throw ArgumentError("radius gate needs 0 < min_radius_mm < max_radius_mm");
  }
  if (!std::isfinite(characteristic_cutoff)) {
    throw ArgumentError("characteristic_cutoff must be finite");
  }
}

double cluster_density(const ShellFit& fit, const ValidityConfig& config) {
  const double r = fit.prototype.radius;
  if (!(r > 0.0)) throw ArgumentError("cluster_density: radius must be positive");
  double mass = 0.0;
  for (double u : fit.memberships) {
    if (u > config.characteristic_cutoff) mass += u;
  }
  return mass / (2.0 * std::numbers::pi * r);
}

double relative_shell_thickness(const ShellFit& fit) {
  const double r = fit.prototype.radius;
  if (!(r > 0.0)) throw ArgumentError("relative_shell_thickness: radius must be positive");
  if (fit.memberships.size() != fit.distances.size()) {
    throw StructureError("relative_shell_thickness: memberships and distances differ");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < fit.memberships.size(); ++k) {
    const double w = std::pow(fit.memberships[k], fit.m);
    num += w * fit.distances[k] * fit.distances[k];
    den += w;
  }
  if (!(den > 0.0)) throw DegenerateFitError("relative_shell_thickness: zero membership mass");
  return num / (r * den);
}

bool passes(double cd, double rst, double radius_px, const ValidityConfig& config,
            double pixel_pitch_mm) {
  const double radius_mm = radius_px * pixel_pitch_mm;
  return cd > config.cd_threshold && rst < config.rst_threshold &&
         radius_mm >= config.min_radius_mm && radius_mm <= config.max_radius_mm;
}

Detection classify(const ShellFit& fit, const ValidityConfig& config, double pixel_pitch_mm,
                   int group_id) {
  Detection d;
  d.center = fit.prototype.center;
  d.radius = fit.prototype.radius;
  d.cluster_density = cluster_density(fit, config);
  d.shell_thickness = relative_shell_thickness(fit);
  d.accepted = passes(d.cluster_density, d.shell_thickness, d.radius, config, pixel_pitch_mm);
  d.group_id = group_id;
  d.iterations = fit.iterations;
  d.converged = fit.converged;
  return d;
}

}  // namespace mcd
