#include <doctest.h>

#include <cmath>

#include "mcd/phantom.hpp"

using namespace mcd;

TEST_SUITE("eval") {
  TEST_CASE("rng: first mt19937_64 output and transforms are fixed") {
    Rng r(5489);
    CHECK(r.next() == 14514284786278117030ULL);
    Rng a(1), b(1);
    for (int i = 0; i < 100; ++i) {
      const double u = a.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      CHECK(u == b.uniform());
    }
  }

  TEST_CASE("empty scene without noise is a smooth background") {
    const auto ph = generate_phantom(256, 256, 0, 0, 0.0, 3);
    CHECK(ph.truths.empty());
    CHECK(ph.image.bit_depth() == 12);
    // Smooth: neighbouring pixels differ by at most one quantisation step plus slope.
    double worst = 0;
    for (std::size_t y = 0; y < 256; ++y)
      for (std::size_t x = 1; x < 256; ++x) worst = std::max(worst, std::abs(ph.image(x, y) - ph.image(x - 1, y)));
    CHECK(worst <= 2.0);
  }

  TEST_CASE("fixed seed is byte identical; different seeds differ") {
    const auto a = generate_phantom(256, 256, 4, 2, 10.0, 42);
    const auto b = generate_phantom(256, 256, 4, 2, 10.0, 42);
    const auto c = generate_phantom(256, 256, 4, 2, 10.0, 43);
    CHECK(encode_pgm(a.image) == encode_pgm(b.image));
    CHECK(truths_to_json(a) == truths_to_json(b));
    CHECK(encode_pgm(a.image) != encode_pgm(c.image));
  }

  TEST_CASE("ten nodules with radii in the mandated range") {
    const auto ph = generate_phantom(512, 512, 10, 0, 10.0, 8);
    REQUIRE(ph.truths.size() == 10);
    for (const auto& t : ph.truths) {
      CHECK(t.kind == TruthKind::kNodular);
      CHECK(t.radius * kDefaultPixelPitchMm >= 0.15);
      CHECK(t.radius * kDefaultPixelPitchMm <= 0.5);
      CHECK(t.center.x > 0);
      CHECK(t.center.x < 512);
      CHECK(t.peak >= 40.0);
      CHECK(t.peak <= 80.0);
    }
  }

  TEST_CASE("lines carry their half length and stay clear of nodules") {
    const auto ph = generate_phantom(512, 512, 8, 4, 10.0, 9);
    int lines = 0;
    for (const auto& t : ph.truths) {
      if (t.kind != TruthKind::kLinear) continue;
      ++lines;
      CHECK(t.radius >= 10.0);
      CHECK(t.radius <= 30.0);
    }
    CHECK(lines == 4);
  }

  TEST_CASE("overcrowding is a generation error") {
    CHECK_THROWS_AS(generate_phantom(256, 256, 200, 0, 10.0, 1), GenerationError);
  }

  TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(generate_phantom(128, 512, 1, 1, 10.0, 1), ArgumentError);
    CHECK_THROWS_AS(generate_phantom(512, 512, -1, 1, 10.0, 1), ArgumentError);
  }

  TEST_CASE("truth sidecar round trip") {
    const auto ph = generate_phantom(256, 256, 3, 2, 10.0, 10);
    CHECK(truths_from_json(truths_to_json(ph)) == ph.truths);
    CHECK_THROWS_AS(truths_from_json(R"({"truths":[{"kind":"blob","x":1,"y":1,"radius":1}]})"),
                    StructureError);
  }
}
