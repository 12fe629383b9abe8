// Randomised invariants across modules, each over a fixed set of seeds.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "mcd/evaluation.hpp"
#include "mcd/phantom.hpp"
#include "mcd/pipeline.hpp"
#include "oracles.hpp"

using namespace mcd;

namespace {

std::vector<Point2> noisy_ring(oracle::Source& src, int n, Point2 c, double r, double sigma) {
  std::vector<Point2> pts;
  for (int k = 0; k < n; ++k) {
    const double t = src.uniform(0, 2 * std::numbers::pi);
    pts.push_back({c.x + r * std::cos(t) + sigma * src.normal(), c.y + r * std::sin(t) + sigma * src.normal()});
  }
  return pts;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("normalize is idempotent and order preserving") {
    oracle::Source src(1);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> v(50);
      for (auto& x : v) x = src.uniform(-1000, 1000);
      const GrayImage img(10, 5, v, 16);
      const auto a = normalize(img, 0, 4095);
      const auto b = normalize(a, 0, 4095);
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(b.data()[i] == doctest::Approx(a.data()[i]).epsilon(1e-12));
        for (std::size_t j = 0; j < v.size(); ++j)
          if (v[i] <= v[j]) CHECK(a.data()[i] <= a.data()[j]);
      }
    }
  }

  TEST_CASE("skewness and kurtosis under affine maps") {
    oracle::Source src(2);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> v(40), pos(40), neg(40);
      for (auto& x : v) x = std::exp(src.normal());
      const double a = src.uniform(0.1, 10), b = src.uniform(-50, 50);
      for (std::size_t i = 0; i < v.size(); ++i) {
        pos[i] = a * v[i] + b;
        neg[i] = -a * v[i] + b;
      }
      CHECK(std::abs(skewness(pos) - skewness(v)) < 1e-9);
      CHECK(std::abs(kurtosis(pos) - kurtosis(v)) < 1e-9);
      CHECK(std::abs(skewness(neg) + skewness(v)) < 1e-9);
      CHECK(std::abs(kurtosis(neg) - kurtosis(v)) < 1e-9);
    }
  }

  TEST_CASE("roi mask is monotone in both thresholds and auditable") {
    oracle::Source src(3);
    RealGrid h(96, 96), v(96, 96);
    for (auto& x : h.values()) x = src.normal() * (src.uniform() < 0.01 ? 20 : 1);
    for (auto& x : v.values()) x = src.normal();
    const auto base = roi_mask(h, v, RoiConfig{});
    RoiConfig tighter;
    tighter.kurt_threshold = 6;
    tighter.skew_threshold = 0.5;
    const auto tight = roi_mask(h, v, tighter);
    for (std::size_t i = 0; i < base.flags.size(); ++i)
      if (tight.flags.values()[i]) CHECK(base.flags.values()[i]);
    // Each set pixel is covered by a window whose oracle statistics pass.
    const auto xs = window_origins(96, 32, 16);
    BinaryGrid audit(96, 96, 0);
    for (auto oy : xs)
      for (auto ox : xs)
        for (const RealGrid* g : {&h, &v}) {
          std::vector<double> w;
          for (std::size_t y = oy; y < oy + 32; ++y)
            for (std::size_t x = ox; x < ox + 32; ++x) w.push_back((*g)(x, y));
          if (oracle::skewness(w) > 0.2 && oracle::kurtosis(w) > 4)
            for (std::size_t y = oy; y < oy + 32; ++y)
              for (std::size_t x = ox; x < ox + 32; ++x) audit(x, y) = 1;
        }
    CHECK(audit == base.flags);
  }

  TEST_CASE("gradient is translation covariant on interior pixels") {
    oracle::Source src(4);
    RealGrid g(30, 20), s(30, 20);
    for (auto& x : g.values()) x = src.uniform(0, 100);
    for (std::size_t y = 0; y < 20; ++y)
      for (std::size_t x = 0; x < 30; ++x) s(x, y) = g((x + 29) % 30, (y + 19) % 20);
    const auto a = gradient_magnitude(g), b = gradient_magnitude(s);
    for (std::size_t y = 1; y + 2 < 20; ++y)
      for (std::size_t x = 1; x + 2 < 30; ++x) CHECK(b(x + 1, y + 1) == a(x, y));
  }

  TEST_CASE("surviving groups cover exactly the masked edge pixels of big components") {
    oracle::Source src(5);
    BinaryGrid e(64, 64, 0);
    for (auto& x : e.values()) x = src.uniform() < 0.35;
    RoiMask m;
    m.width = m.height = 64;
    m.flags = BinaryGrid(64, 64, 0);
    for (auto& x : m.flags.values()) x = src.uniform() < 0.7;
    const auto out = restrict_to_roi(connected_groups(e), m);
    // Oracle: components of (edges AND mask) with >= 5 pixels.
    BinaryGrid both(64, 64, 0);
    for (std::size_t i = 0; i < both.size(); ++i) both.values()[i] = e.values()[i] && m.flags.values()[i];
    std::set<PixelPoint> want, got;
    for (const auto& g : connected_groups(both))
      for (auto p : g.points) want.insert(p);
    for (const auto& g : out) {
      CHECK(g.points.size() >= kMinGroupSize);
      for (auto p : g.points) {
        CHECK(m.at(p.x, p.y));
        got.insert(p);
      }
    }
    CHECK(got == want);
  }

  TEST_CASE("membership decreases with distance and is scale homogeneous") {
    oracle::Source src(6);
    for (int t = 0; t < 50; ++t) {
      FcsConfig c;
      c.m = src.uniform(1.5, 3);
      c.w = src.uniform(1, 20);
      const double d1 = src.uniform(0, 5), d2 = d1 + src.uniform(0.01, 5);
      CHECK(membership(d2, c) < membership(d1, c));
      const double s = src.uniform(0.2, 5);
      FcsConfig cs = c;
      cs.w = c.w * s * s;
      CHECK(membership(d1 * s, cs) == doctest::Approx(membership(d1, c)).epsilon(1e-12));
    }
  }

  TEST_CASE("objective never increases over iterations (100 random sets)") {
    oracle::Source src(7);
    for (int t = 0; t < 100; ++t) {
      auto pts = noisy_ring(src, 30, {src.uniform(-20, 20), src.uniform(-20, 20)}, src.uniform(3, 12),
                            src.uniform(0, 1.5));
      for (int k = 0; k < 5; ++k) pts.push_back({src.uniform(-30, 30), src.uniform(-30, 30)});
      std::vector<FitTraceRow> trace;
      fit_shell(pts, FcsConfig{}, &trace);
      for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i].objective <= trace[i - 1].objective + 1e-9);
    }
  }

  TEST_CASE("validity measures: rigid motion invariance, RST scales linearly") {
    oracle::Source src(8);
    for (int t = 0; t < 20; ++t) {
      const auto pts = noisy_ring(src, 40, {0, 0}, 6, 0.3);
      const auto fit = fit_shell(pts, FcsConfig{});
      const double th = src.uniform(0, 6.28), tx = src.uniform(-50, 50), ty = src.uniform(-50, 50);
      std::vector<Point2> moved;
      for (auto p : pts)
        moved.push_back({std::cos(th) * p.x - std::sin(th) * p.y + tx, std::sin(th) * p.x + std::cos(th) * p.y + ty});
      ShellFit mf = fit;
      mf.prototype.center = {std::cos(th) * fit.prototype.center.x - std::sin(th) * fit.prototype.center.y + tx,
                             std::sin(th) * fit.prototype.center.x + std::cos(th) * fit.prototype.center.y + ty};
      mf.distances.clear();
      for (auto p : moved) mf.distances.push_back(shell_distance(p, mf.prototype));
      CHECK(cluster_density(mf) == doctest::Approx(cluster_density(fit)).epsilon(1e-12));
      CHECK(relative_shell_thickness(mf) == doctest::Approx(relative_shell_thickness(fit)).epsilon(1e-9));

      const double s = src.uniform(0.5, 4);
      ShellFit sf = fit;
      sf.prototype.radius *= s;
      for (auto& d : sf.distances) d *= s;
      CHECK(relative_shell_thickness(sf) == doctest::Approx(s * relative_shell_thickness(fit)).epsilon(1e-12));
    }
  }

  TEST_CASE("classify is monotone in its thresholds") {
    oracle::Source src(9);
    for (int t = 0; t < 30; ++t) {
      const auto fit = fit_shell(noisy_ring(src, 30, {0, 0}, src.uniform(3, 11), src.uniform(0, 1)), FcsConfig{});
      const auto base = classify(fit, ValidityConfig{});
      ValidityConfig tight;
      tight.cd_threshold = 1.15 + src.uniform(0, 1);
      tight.rst_threshold = 0.2 - src.uniform(0, 0.19);
      if (!base.accepted) CHECK_FALSE(classify(fit, tight).accepted);
    }
  }

  TEST_CASE("match counts do not depend on detection order") {
    oracle::Source src(10);
    for (int t = 0; t < 30; ++t) {
      std::vector<Truth> truths;
      std::vector<Detection> dets;
      for (int k = 0; k < 6; ++k) truths.push_back({{src.uniform(0, 100), src.uniform(0, 100)}, 5, TruthKind::kNodular});
      for (int k = 0; k < 8; ++k) {
        Detection d;
        d.center = {src.uniform(0, 100), src.uniform(0, 100)};
        dets.push_back(d);
      }
      const auto a = match_detections(dets, truths);
      std::reverse(dets.begin(), dets.end());
      const auto b = match_detections(dets, truths);
      CHECK(a.tp == b.tp);
      CHECK(a.fp == b.fp);
      CHECK(a.fn == b.fn);
    }
  }

  TEST_CASE("accepted detections sit inside the ROI and near their group") {
    for (std::uint64_t seed : {100u, 101u}) {
      const auto ph = generate_phantom(256, 256, 4, 2, 10.0, seed);
      const PipelineConfig cfg;
      const auto report = detect(ph.image, cfg);
      const auto enhanced = enhance_image(ph.image, report.config.levels, {cfg.gain, true});
      const auto pyr = swt2_forward(enhanced.pixels(), cfg.roi_levels);
      std::vector<const RealGrid*> bands;
      for (const auto& lv : pyr.levels) {
        bands.push_back(&lv.lh);
        bands.push_back(&lv.hl);
      }
      const auto mask = roi_mask(bands, cfg.roi);
      const auto groups =
          restrict_to_roi(connected_groups(edge_map(gradient_magnitude(enhanced.pixels()), cfg.edges)), mask);
      for (const auto& d : report.accepted()) {
        CHECK(mask.at(std::size_t(std::lround(d.center.x)), std::size_t(std::lround(d.center.y))));
        const auto& g = groups.at(static_cast<std::size_t>(d.group_id));
        int x0 = 1 << 30, y0 = 1 << 30, x1 = -1, y1 = -1;
        for (auto p : g.points) {
          x0 = std::min(x0, p.x);
          y0 = std::min(y0, p.y);
          x1 = std::max(x1, p.x);
          y1 = std::max(y1, p.y);
        }
        CHECK(d.center.x >= x0 - d.radius);
        CHECK(d.center.x <= x1 + d.radius);
        CHECK(d.center.y >= y0 - d.radius);
        CHECK(d.center.y <= y1 + d.radius);
      }
    }
  }

  TEST_CASE("froc: a tighter pair never has a higher tp ratio") {
    std::vector<EvaluatedCase> cases;
    for (std::uint64_t s = 200; s < 203; ++s) {
      const auto ph = generate_phantom(256, 256, 4, 2, 10.0, s);
      cases.push_back({detect(ph.image), ph.truths});
    }
    oracle::Source src(11);
    for (int t = 0; t < 20; ++t) {
      const OperatingPoint loose{src.uniform(0, 1.5), src.uniform(0.05, 0.5)};
      const OperatingPoint tight{loose.cd + src.uniform(0.01, 0.5), loose.rst - src.uniform(0.0, 0.04)};
      const std::vector<OperatingPoint> sweep{loose, tight};
      const auto curve = froc_curve(cases, sweep);
      const auto& l = curve[0].cd == loose.cd ? curve[0] : curve[1];
      const auto& r = curve[0].cd == loose.cd ? curve[1] : curve[0];
      CHECK(r.tp_ratio <= l.tp_ratio);
    }
  }
}
