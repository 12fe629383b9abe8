#include "mcd/shell_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcd {

namespace {

constexpr double kCoincident = 1e-9;
constexpr double kCenterTolerance = 1e-6;
constexpr int kInnerSteps = 5;
constexpr double kMinSeedRadius = 0.5;

double norm(double dx, double dy) { return std::hypot(dx, dy); }

std::vector<double> weights(std::span<const double> u, double m) {
  std::vector<double> w(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) w[k] = std::pow(u[k], m);
  return w;
}

double weighted_radius(std::span<const Point2> pts, std::span<const double> w,
                       Point2 center, double wsum) {
  double acc = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    acc += w[k] * norm(pts[k].x - center.x, pts[k].y - center.y);
  }
  return acc / wsum;
}

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Weights u^m; throws when the memberships carry no mass.
std::vector<double> checked_weights(std::span<const Point2> pts, std::span<const double> u,
                                    const FcsConfig& c) {
  if (pts.size() != u.size()) {
    throw ArgumentError("prototype update: membership count differs from point count");
  }
  auto w = weights(u, c.m);
  if (!(sum(w) > std::numeric_limits<double>::min())) {
    throw DegenerateFitError("shell update: all memberships are zero");
  }
  return w;
}

// Points within 1e-9 of the center keep only their x term.
Point2 step_center(std::span<const Point2> pts, std::span<const double> w, double wsum,
                   const ShellPrototype& p) {
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double dx = pts[k].x - p.center.x;
    const double dy = pts[k].y - p.center.y;
    const double d = norm(dx, dy);
    double tx = pts[k].x;
    double ty = pts[k].y;
    if (d >= kCoincident) {
      tx -= p.radius * dx / d;
      ty -= p.radius * dy / d;
    }
    sx += w[k] * tx;
    sy += w[k] * ty;
  }
  return {sx / wsum, sy / wsum};
}

std::vector<double> distances_to(std::span<const Point2> pts, const ShellPrototype& p) {
  std::vector<double> d(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) d[k] = shell_distance(pts[k], p);
  return d;
}

double objective_from_distances(std::span<const double> d, std::span<const double> u,
                                const FcsConfig& c) {
  double fit = 0.0;
  double penalty = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    fit += std::pow(u[k], c.m) * d[k] * d[k];
    penalty += std::pow(1.0 - u[k], c.m);
  }
  return fit + c.w * penalty;
}

double l2_change(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

std::vector<Point2> to_points(const EdgeGroup& group) {
  std::vector<Point2> pts;
  pts.reserve(group.points.size());
  for (const auto& p : group.points) pts.push_back({double(p.x), double(p.y)});
  return pts;
}

void FcsConfig::validate() const {
  if (!(m > 1.0) || !std::isfinite(m)) throw ArgumentError("FCS: m must be > 1");
  if (!(w > 0.0) || !std::isfinite(w)) throw ArgumentError("FCS: W must be > 0");
  if (!(epsilon > 0.0)) throw ArgumentError("FCS: epsilon must be > 0");
  if (max_iter < 1) throw ArgumentError("FCS: max_iter must be >= 1");
  if (restarts < 1 || restarts > 3) throw ArgumentError("FCS: restarts must lie in 1..3");
}

double shell_distance(Point2 point, const ShellPrototype& prototype) {
  return std::abs(norm(point.x - prototype.center.x, point.y - prototype.center.y) -
                  prototype.radius);
}

double objective(std::span<const Point2> points, const ShellPrototype& prototype,
                 std::span<const double> memberships, const FcsConfig& config) {
  if (points.size() != memberships.size()) {
    throw ArgumentError("objective: membership count differs from point count");
  }
  return objective_from_distances(distances_to(points, prototype), memberships, config);
}

double membership(double distance, const FcsConfig& config) {
  if (distance == 0.0) return 1.0;
  if (config.membership_rule == MembershipRule::kLiteral) {
    const double u = 1.0 / std::pow(distance / config.w, 2.0 / (config.m - 1.0));
    return std::clamp(u, 0.0, 1.0);
  }
  const double ratio = distance * distance / config.w;
  return 1.0 / (1.0 + std::pow(ratio, 1.0 / (config.m - 1.0)));
}

std::vector<double> update_memberships(std::span<const Point2> points,
                                       const ShellPrototype& prototype,
                                       const FcsConfig& config) {
  std::vector<double> u(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    u[k] = membership(shell_distance(points[k], prototype), config);
  }
  return u;
}

double radius_update(std::span<const Point2> points, std::span<const double> memberships,
                     Point2 center, const FcsConfig& config) {
  const auto w = checked_weights(points, memberships, config);
  return weighted_radius(points, w, center, sum(w));
}

Point2 center_step(std::span<const Point2> points, std::span<const double> memberships,
                   const ShellPrototype& prototype, const FcsConfig& config) {
  const auto w = checked_weights(points, memberships, config);
  return step_center(points, w, sum(w), prototype);
}

ShellPrototype update_prototype(std::span<const Point2> points,
                                std::span<const double> memberships,
                                const ShellPrototype& previous, const FcsConfig& config) {
  const auto w = checked_weights(points, memberships, config);
  const double wsum = sum(w);
  ShellPrototype p = previous;
  for (int step = 0; step < kInnerSteps; ++step) {
    p.radius = weighted_radius(points, w, p.center, wsum);
    const Point2 next = step_center(points, w, wsum, p);
    const double moved = norm(next.x - p.center.x, next.y - p.center.y);
    p.center = next;
    if (moved < kCenterTolerance) break;
  }
  p.radius = weighted_radius(points, w, p.center, wsum);
  return p;
}

ShellPrototype seed_from_points(std::span<const Point2> points) {
  if (points.size() < 3) throw ArgumentError("seed needs at least 3 points");
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : points) {
    cx += p.x;
    cy += p.y;
  }
  const double n = static_cast<double>(points.size());
  cx /= n;
  cy /= n;
  double r = 0.0;
  for (const auto& p : points) r += norm(p.x - cx, p.y - cy);
  return {{cx, cy}, std::max(r / n, kMinSeedRadius)};
}

ShellPrototype seed_from_group(const EdgeGroup& group) {
  return seed_from_points(to_points(group));
}

void require_circle_geometry(std::span<const Point2> points) {
  std::vector<Point2> distinct(points.begin(), points.end());
  std::sort(distinct.begin(), distinct.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) {
    throw UnderdeterminedFitError("shell fit needs at least 3 distinct points");
  }
  // Collinear iff the scatter matrix is rank one.
  double mx = 0.0, my = 0.0;
  for (const auto& p : distinct) {
    mx += p.x;
    my += p.y;
  }
  mx /= double(distinct.size());
  my /= double(distinct.size());
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : distinct) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  const double trace = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  if (det <= 1e-12 * trace * trace) {
    throw UnderdeterminedFitError("shell fit points are collinear");
  }
}

ShellFit fit_shell(std::span<const Point2> points, const ShellPrototype& seed,
                   const FcsConfig& config, std::vector<FitTraceRow>* trace) {
  config.validate();
  require_circle_geometry(points);

  ShellFit fit;
  fit.m = config.m;
  fit.prototype = seed;
  fit.memberships = update_memberships(points, seed, config);
  if (trace) {
    trace->push_back({0, objective(points, seed, fit.memberships, config), seed});
  }
  for (int it = 1; it <= config.max_iter; ++it) {
    fit.prototype = update_prototype(points, fit.memberships, fit.prototype, config);
    auto next = update_memberships(points, fit.prototype, config);
    const double change = l2_change(next, fit.memberships);
    fit.memberships = std::move(next);
    fit.iterations = it;
    if (trace) {
      trace->push_back(
          {it, objective(points, fit.prototype, fit.memberships, config), fit.prototype});
    }
    if (change < config.epsilon) {
      fit.converged = true;
      break;
    }
  }
  fit.distances = distances_to(points, fit.prototype);
  fit.objective = objective_from_distances(fit.distances, fit.memberships, config);
  return fit;
}

ShellFit fit_shell(std::span<const Point2> points, const FcsConfig& config,
                   std::vector<FitTraceRow>* trace) {
  config.validate();
  const ShellPrototype base = seed_from_points(points);
  static constexpr Point2 kJitter[] = {{0.0, 0.0}, {1.0, -1.0}, {-1.0, 1.0}};

  std::optional<ShellFit> best;
  std::vector<FitTraceRow> best_trace;
  for (int i = 0; i < config.restarts; ++i) {
    ShellPrototype seed = base;
    seed.center.x += kJitter[i].x;
    seed.center.y += kJitter[i].y;
    if (i > 0) {
      double r = 0.0;
      for (const auto& p : points) r += norm(p.x - seed.center.x, p.y - seed.center.y);
      seed.radius = std::max(r / double(points.size()), kMinSeedRadius);
    }
    std::vector<FitTraceRow> local;
    auto fit = fit_shell(points, seed, config, trace ? &local : nullptr);
    if (!best || fit.objective < best->objective) {
      best = std::move(fit);
      best_trace = std::move(local);
    }
  }
  if (trace) *trace = std::move(best_trace);
  return std::move(*best);
}

ShellFit fit_shell(const EdgeGroup& group, const FcsConfig& config,
                   std::vector<FitTraceRow>* trace) {
  const auto pts = to_points(group);
  return fit_shell(std::span<const Point2>(pts), config, trace);
}

}  // namespace mcd
