#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcd/phantom.hpp"
#include "mcd/pipeline.hpp"
#include "mcd/report.hpp"
#include "oracles.hpp"

using namespace mcd;

namespace {

// Smooth gradient plus noise with an optional planted shape.
RealGrid textured_background(std::size_t n, std::uint64_t seed) {
  oracle::Source src(seed);
  RealGrid g(n, n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      g(x, y) = 1000 + 30 * std::sin(double(x) / 40) + 20 * std::cos(double(y) / 55) + 10 * src.normal();
  return g;
}

// Bright disk with a slightly blurred rim.
void add_nodule(RealGrid& g, double cx, double cy, double r, double peak) {
  for (std::size_t y = 0; y < g.height(); ++y)
    for (std::size_t x = 0; x < g.width(); ++x) {
      const double d = std::hypot(double(x) - cx, double(y) - cy) - r;
      g(x, y) += peak * 0.5 * std::erfc(d / (std::sqrt(2.0) * 0.4));
    }
}

void add_segment(RealGrid& g, double x0, double y0, double len, double peak) {
  for (std::size_t y = 0; y < g.height(); ++y)
    for (std::size_t x = 0; x < g.width(); ++x) {
      const double t = std::clamp(double(x) - x0, 0.0, len);
      const double d = std::hypot(double(x) - x0 - t, double(y) - y0);
      g(x, y) += peak * std::exp(-d * d / (2 * 0.8 * 0.8));
    }
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("flat image yields an empty report") {
    const auto r = detect(GrayImage(RealGrid(128, 128, 700.0), 12));
    CHECK(r.counts.roi_windows_fired == 0);
    CHECK(r.detections.empty());
    CHECK(r.counts.accepted == 0);
  }

  TEST_CASE("one bright nodule gives exactly one accepted detection near its center") {
    auto g = textured_background(128, 21);
    add_nodule(g, 60.3, 70.6, 5.0, 80.0);
    const auto r = detect(GrayImage(g, 12));
    const auto acc = r.accepted();
    REQUIRE(acc.size() == 1);
    CHECK(std::hypot(acc[0].center.x - 60.3, acc[0].center.y - 70.6) < 2.0);
  }

  TEST_CASE("a 30 px segment yields no accepted detection") {
    auto g = textured_background(128, 21);
    add_segment(g, 40, 64, 30, 80.0);
    const auto r = detect(GrayImage(g, 12));
    CHECK(r.accepted().empty());
  }

  TEST_CASE("counts are consistent") {
    const auto ph = generate_phantom(256, 256, 3, 2, 10.0, 5);
    const auto r = detect(ph.image);
    CHECK(r.counts.fits_attempted == r.counts.roi_groups);
    CHECK(r.counts.fits_attempted == r.detections.size() + r.counts.fits_rejected_geometry);
    CHECK(r.counts.accepted == r.accepted().size());
  }

  TEST_CASE("small images and bad configs are input errors") {
    CHECK_THROWS_AS(detect(GrayImage(RealGrid(63, 128, 1.0), 8)), ArgumentError);
    PipelineConfig c;
    c.levels = 12;
    CHECK_THROWS_AS(detect(GrayImage(RealGrid(128, 128, 1.0), 8), c), ArgumentError);
    c = {};
    c.roi_levels = 0;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
  }

  TEST_CASE("automatic levels are min(10, floor(log2 min dim))") {
    const PipelineConfig c;
    CHECK(c.resolved_levels(512, 300) == 8);
    CHECK(c.resolved_levels(4096, 2048) == 10);
  }

  TEST_CASE("the config snapshot reproduces the run") {
    const auto ph = generate_phantom(256, 256, 3, 1, 10.0, 6);
    PipelineConfig c;
    c.edges.k = 1.4;
    const auto a = detect(ph.image, c, "x");
    const auto again = detect(ph.image, config_from_json(config_to_json(a.config)), "x");
    CHECK(report_to_json(a) == report_to_json(again));
  }
}
