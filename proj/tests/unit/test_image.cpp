#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>

#include "mcd/image.hpp"
#include "oracles.hpp"

using namespace mcd;

namespace {

std::vector<std::uint8_t> bytes(const std::string& s) { return {s.begin(), s.end()}; }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mcd_test_" + name);
}

}  // namespace

TEST_SUITE("image_io") {
  TEST_CASE("P2 header and values are transcribed") {
    const auto img = parse_pgm(bytes("P2\n# comment\n2 2\n255\n0 10\n20 30\n"));
    CHECK(img.width() == 2);
    CHECK(img.height() == 2);
    CHECK(img.bit_depth() == 8);
    CHECK(img(0, 0) == 0);
    CHECK(img(1, 0) == 10);
    CHECK(img(0, 1) == 20);
    CHECK(img(1, 1) == 30);
  }

  TEST_CASE("P5 maxval 4095 gives bit depth 12 and big-endian samples") {
    auto raw = bytes("P5\n2 1\n4095\n");
    raw.insert(raw.end(), {0x0F, 0xFF, 0x01, 0x02});
    const auto img = parse_pgm(raw);
    CHECK(img.bit_depth() == 12);
    CHECK(img(0, 0) == 4095);
    CHECK(img(1, 0) == 258);
  }

  TEST_CASE("malformed headers report a byte offset") {
    CHECK_THROWS_AS(parse_pgm(bytes("P7\n1 1\n255\n")), ParseError);
    try {
      parse_pgm(bytes("P2\n2 x\n255\n"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 5);
    }
    CHECK_THROWS_AS(parse_pgm(bytes("P5\n2 2\n255\nab")), ParseError);
  }

  TEST_CASE("maxval above 65535 is unsupported") {
    CHECK_THROWS_AS(parse_pgm(bytes("P2\n1 1\n70000\n5\n")), UnsupportedFormatError);
  }

  TEST_CASE("smallest P5 file") {
    const auto enc = encode_pgm(GrayImage(1, 1, {255.0}, 8));
    CHECK(enc == bytes("P5\n1 1\n255\n\xFF"));
  }

  TEST_CASE("save/load round trip is bit exact for 8, 12 and 16 bits") {
    oracle::Source src(7);
    for (int bd : {8, 12, 16}) {
      const double maxval = std::ldexp(1.0, bd) - 1;
      std::vector<double> data(13 * 7);
      for (auto& v : data) v = std::floor(src.uniform(0, maxval + 1));
      data[0] = maxval;
      const GrayImage img(13, 7, data, bd);
      const auto path = temp_file("rt" + std::to_string(bd) + ".pgm");
      save_pgm(img, path);
      const auto back = load_pgm(path);
      CHECK(back == img);
      std::filesystem::remove(path);
    }
  }

  TEST_CASE("12-bit images are written with two bytes per sample") {
    const auto enc = encode_pgm(GrayImage(3, 1, {0.0, 1.0, 4095.0}, 12));
    const std::string header = "P5\n3 1\n4095\n";
    CHECK(enc.size() == header.size() + 6);
  }

  TEST_CASE("out-of-range pixels are rejected on save") {
    CHECK_THROWS_AS(encode_pgm(GrayImage(1, 1, {256.0}, 8)), RangeError);
    CHECK_THROWS_AS(encode_pgm(GrayImage(1, 1, {-1.0}, 8)), RangeError);
  }

  TEST_CASE("invalid images are refused") {
    CHECK_THROWS_AS(GrayImage(2, 2, {1.0, 2.0, 3.0}, 8), StructureError);
    CHECK_THROWS_AS(GrayImage(1, 1, {std::nan("")}, 8), RangeError);
    CHECK_THROWS_AS(GrayImage(1, 1, {1.0}, 8, 0.0), ArgumentError);
  }

  TEST_CASE("normalize maps endpoints and handles constants") {
    const auto a = normalize(GrayImage(3, 1, {0.0, 50.0, 100.0}, 8), 0, 1);
    CHECK(a(0, 0) == 0.0);
    CHECK(a(1, 0) == doctest::Approx(0.5));
    CHECK(a(2, 0) == 1.0);
    const auto b = normalize(GrayImage(3, 1, {7.0, 7.0, 7.0}, 8), 0, 1);
    CHECK(b(0, 0) == 0.0);
    CHECK(b(2, 0) == 0.0);
    const auto c = normalize(GrayImage(2, 1, {10.0, 20.0}, 12), 0, 4095);
    CHECK(c(0, 0) == 0.0);
    CHECK(c(1, 0) == 4095.0);
  }

  TEST_CASE("midpoint circle matches the rounded-arc oracle") {
    for (int r = 0; r < 200; ++r) {
      auto got = midpoint_circle(r);
      std::sort(got.begin(), got.end());
      CHECK_MESSAGE(got == oracle::circle_pixels(r), "r = " << r);
    }
  }

  TEST_CASE("overlay: empty list is the gray expansion") {
    const GrayImage img(3, 2, {0.0, 100.0, 255.0, 1.0, 2.0, 3.0}, 8);
    const auto out = render_overlay(img, {});
    CHECK(out.drawn == 0);
    CHECK(out.skipped == 0);
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t x = 0; x < 3; ++x) {
        const auto v = static_cast<std::uint8_t>(img(x, y));
        CHECK(out.image.at(x, y) == Rgb{v, v, v});
      }
  }

  TEST_CASE("overlay: one circle recolors exactly the circle pixels") {
    const GrayImage img(100, 100, std::vector<double>(100 * 100, 0.0), 8);
    const OverlayCircle c{50, 50, 5};
    const auto out = render_overlay(img, std::span(&c, 1));
    CHECK(out.drawn == 1);
    std::set<std::pair<int, int>> expect;
    for (auto [dx, dy] : oracle::circle_pixels(5)) expect.emplace(50 + dx, 50 + dy);
    for (int y = 0; y < 100; ++y)
      for (int x = 0; x < 100; ++x) {
        const bool red = out.image.at(x, y) == Rgb{255, 0, 0};
        CHECK(red == expect.contains({x, y}));
      }
  }

  TEST_CASE("overlay: off-image detection is skipped and counted") {
    const GrayImage img(10, 10, std::vector<double>(100, 0.0), 8);
    const OverlayCircle c{-10, -10, 3};
    const auto out = render_overlay(img, std::span(&c, 1));
    CHECK(out.skipped == 1);
    CHECK(out.drawn == 0);
  }
}
