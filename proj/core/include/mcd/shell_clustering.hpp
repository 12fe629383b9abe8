#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mcd/edges.hpp"

namespace mcd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

std::vector<Point2> to_points(const EdgeGroup& group);

/// Circle shell: center v and radius r, in pixel coordinates.
struct ShellPrototype {
  Point2 center;
  double radius = 1.0;
};

/// How memberships are derived from shell distances.
///
/// kDerived is the stationary point of the possibilistic objective in u:
///   u = 1 / (1 + (D^2 / W)^(1/(m-1)))
/// so u = 1/2 exactly where D^2 = W.
/// kLiteral evaluates 1 / (D / W)^(2/(m-1)) and clamps it to [0, 1]; it is
/// kept for comparison and does not minimise the objective.
enum class MembershipRule { kDerived, kLiteral };

struct FcsConfig {
  double m = 2.0;         // fuzzifier, > 1
  double w = 9.0;         // shell bandwidth W (squared-distance scale)
  double epsilon = 1e-4;  // stop when ||u_new - u_old||_2 < epsilon
  int max_iter = 100;
  int restarts = 3;       // seeds tried per group; lowest objective wins
  MembershipRule membership_rule = MembershipRule::kDerived;

  void validate() const;
};

struct ShellFit {
  ShellPrototype prototype;
  std::vector<double> memberships;
  std::vector<double> distances;  // shell distances at the final prototype
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double m = 2.0;  // fuzzifier the fit was produced with
};

struct FitTraceRow {
  int iteration = 0;
  double objective = 0.0;
  ShellPrototype prototype;
};

/// | ||x - v|| - r |
double shell_distance(Point2 point, const ShellPrototype& prototype);

/// sum_k u_k^m D_k^2 + W * sum_k (1 - u_k)^m for one prototype.
double objective(std::span<const Point2> points, const ShellPrototype& prototype,
                 std::span<const double> memberships, const FcsConfig& config);

double membership(double distance, const FcsConfig& config);

std::vector<double> update_memberships(std::span<const Point2> points,
                                       const ShellPrototype& prototype,
                                       const FcsConfig& config);

/// Closed-form minimiser of the objective in r for a fixed center:
/// sum w d / sum w with w = u^m and d = ||x - v||.
double radius_update(std::span<const Point2> points, std::span<const double> memberships,
                     Point2 center, const FcsConfig& config);

/// One fixed-point center step at fixed radius:
///   v <- sum w (x - r (x - v) / d) / sum w.
/// Equals v - grad_v J / (2 sum w), with J the objective at fixed u and r.
Point2 center_step(std::span<const Point2> points, std::span<const double> memberships,
                   const ShellPrototype& prototype, const FcsConfig& config);

/// Radius is the closed-form minimiser sum w d / sum w (w = u^m). The center
/// takes a fixed-point step
///   v <- sum w (x - r (x - v) / d) / sum w,
/// which is a majorise-minimise step and never increases the objective; the
/// direction term is dropped for points within 1e-9 of the center. Radius and
/// center alternate up to 5 times or until the center moves < 1e-6, and the
/// radius is refreshed for the final center.
ShellPrototype update_prototype(std::span<const Point2> points,
                                std::span<const double> memberships,
                                const ShellPrototype& previous,
                                const FcsConfig& config);

/// Centroid and mean distance to it, floored at 0.5 px.
ShellPrototype seed_from_points(std::span<const Point2> points);
ShellPrototype seed_from_group(const EdgeGroup& group);

/// Throws UnderdeterminedFitError unless the points hold at least 3 distinct
/// positions that are not all collinear.
void require_circle_geometry(std::span<const Point2> points);

/// Alternating optimisation from one seed.
ShellFit fit_shell(std::span<const Point2> points, const ShellPrototype& seed,
                   const FcsConfig& config, std::vector<FitTraceRow>* trace = nullptr);

/// Runs fit_shell from config.restarts seeds (centroid, then the centroid
/// shifted by (+1,-1) and (-1,+1) px) and keeps the lowest objective.
ShellFit fit_shell(std::span<const Point2> points, const FcsConfig& config,
                   std::vector<FitTraceRow>* trace = nullptr);
ShellFit fit_shell(const EdgeGroup& group, const FcsConfig& config,
                   std::vector<FitTraceRow>* trace = nullptr);

}  // namespace mcd
