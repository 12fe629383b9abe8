#include <doctest.h>

#include <cmath>

#include "mcd/edges.hpp"
#include "oracles.hpp"

using namespace mcd;

namespace {

BinaryGrid from_points(std::size_t w, std::size_t h, std::initializer_list<std::pair<int, int>> pts) {
  BinaryGrid g(w, h, 0);
  for (auto [x, y] : pts) g(x, y) = 1;
  return g;
}

RoiMask full_mask(std::size_t w, std::size_t h, std::uint8_t v) {
  RoiMask m;
  m.width = w;
  m.height = h;
  m.flags = BinaryGrid(w, h, v);
  return m;
}

}  // namespace

TEST_SUITE("edges") {
  TEST_CASE("gradient: constant image is zero, ramps use central and one-sided differences") {
    const auto z = gradient_magnitude(RealGrid(5, 4, 3.0));
    for (double v : z.values()) CHECK(v == 0.0);
    RealGrid ramp(5, 4);
    for (std::size_t y = 0; y < 4; ++y)
      for (std::size_t x = 0; x < 5; ++x) ramp(x, y) = double(x * x) + 2.0 * double(y);
    const auto g = gradient_magnitude(ramp);
    CHECK(g(2, 1) == doctest::Approx(0.5 * (9 - 1) + 2.0));
    CHECK(g(0, 0) == doctest::Approx(1.0 + 2.0));
    CHECK(g(4, 3) == doctest::Approx(16.0 - 9.0 + 2.0));
    CHECK_THROWS_AS(gradient_magnitude(RealGrid(2, 5)), ArgumentError);
  }

  TEST_CASE("edge map: all-zero input stays empty") {
    const auto e = edge_map(RealGrid(8, 8, 0.0));
    for (auto v : e.values()) CHECK(v == 0);
  }

  TEST_CASE("edge map: a single spike is the only edge for any k >= 0") {
    RealGrid g(10, 10, 0.0);
    g(3, 4) = 100.0;
    for (double k : {0.0, 1.0, 2.0, 5.0}) {
      // Oracle threshold: mean + k sigma over the 100 values.
      const double mean = 1.0, sigma = std::sqrt(100.0 * 100.0 / 100.0 - 1.0);
      REQUIRE(100.0 > mean + k * sigma);
      const auto e = edge_map(g, EdgePolicy{k});
      for (std::size_t y = 0; y < 10; ++y)
        for (std::size_t x = 0; x < 10; ++x) CHECK((e(x, y) != 0) == (x == 3 && y == 4));
    }
  }

  TEST_CASE("edge map: k = 0 keeps exactly the above-mean pixels") {
    RealGrid g(4, 1, std::vector<double>{1, 2, 3, 6});
    const auto e = edge_map(g, EdgePolicy{0.0});
    CHECK(e.storage() == std::vector<std::uint8_t>{0, 0, 0, 1});
  }

  TEST_CASE("connected groups: size rule, diagonal joins, separation") {
    CHECK(connected_groups(from_points(10, 10, {{0, 0}, {2, 2}, {4, 4}, {6, 6}})).empty());
    const auto diag = connected_groups(from_points(10, 10, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}));
    REQUIRE(diag.size() == 1);
    CHECK(diag[0].points.size() == 5);
    const auto two = connected_groups(from_points(
        12, 4, {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {5, 0}, {6, 0}, {7, 0}, {5, 1}, {6, 1}, {7, 1}}));
    REQUIRE(two.size() == 2);
    CHECK(two[0].id == 0);
    CHECK(two[1].id == 1);
    CHECK(two[0].points.front() == PixelPoint{0, 0});
    CHECK(two[1].points.front() == PixelPoint{5, 0});
  }

  TEST_CASE("restrict: identity, total rejection, and dropping below five") {
    const auto groups = connected_groups(from_points(10, 10, {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}}));
    REQUIRE(groups.size() == 1);
    CHECK(restrict_to_roi(groups, full_mask(10, 10, 1))[0].points == groups[0].points);
    CHECK(restrict_to_roi(groups, full_mask(10, 10, 0)).empty());
    auto m = full_mask(10, 10, 1);
    m.flags(1, 1) = 0;
    m.flags(2, 1) = 0;
    CHECK(restrict_to_roi(groups, m).empty());
  }

  TEST_CASE("restrict: a group cut in two is re-split before the size test") {
    BinaryGrid e(20, 3, 0);
    for (int x = 0; x < 13; ++x) e(x, 1) = 1;
    const auto groups = connected_groups(e);
    auto m = full_mask(20, 3, 1);
    m.flags(6, 0) = m.flags(6, 1) = m.flags(6, 2) = 0;
    const auto out = restrict_to_roi(groups, m);
    REQUIRE(out.size() == 2);
    CHECK(out[0].points.size() == 6);
    CHECK(out[1].points.size() == 6);
  }

  TEST_CASE("restrict: mask smaller than the groups is a structure error") {
    const auto groups = connected_groups(from_points(10, 10, {{5, 5}, {6, 5}, {7, 5}, {8, 5}, {9, 5}}));
    CHECK_THROWS_AS(restrict_to_roi(groups, full_mask(6, 6, 1)), StructureError);
  }
}
