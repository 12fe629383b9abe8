#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "mcd/phantom.hpp"
#include "mcd/pipeline.hpp"

namespace {

const mcd::Phantom& phantom(std::size_t size) {
  static const auto p256 = mcd::generate_phantom(256, 256, 3, 2, 10.0, 1);
  static const auto p512 = mcd::generate_phantom(512, 512, 8, 4, 10.0, 1);
  return size == 256 ? p256 : p512;
}

void BM_Dwt2RoundTrip(benchmark::State& state) {
  const auto& img = phantom(static_cast<std::size_t>(state.range(0))).image;
  for (auto _ : state) {
    auto back = mcd::dwt2_inverse(mcd::dwt2_forward(img, 5));
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_Dwt2RoundTrip)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Swt2Forward(benchmark::State& state) {
  const auto& img = phantom(512).image;
  for (auto _ : state) {
    auto pyr = mcd::swt2_forward(img, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(pyr);
  }
}
BENCHMARK(BM_Swt2Forward)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_RoiMask(benchmark::State& state) {
  const auto pyr = mcd::swt2_forward(phantom(512).image, 1);
  mcd::RoiConfig cfg;
  cfg.stride = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto mask = mcd::roi_mask(pyr.levels[0].lh, pyr.levels[0].hl, cfg);
    benchmark::DoNotOptimize(mask);
  }
}
BENCHMARK(BM_RoiMask)->Arg(16)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_FitShell(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<mcd::Point2> pts;
  for (int k = 0; k < n; ++k) {
    const double t = 2 * std::numbers::pi * k / n;
    pts.push_back({30 + 6 * std::cos(t) + 0.3 * std::sin(7.0 * k), 40 + 6 * std::sin(t)});
  }
  const mcd::FcsConfig cfg;
  for (auto _ : state) {
    auto fit = mcd::fit_shell(pts, cfg);
    benchmark::DoNotOptimize(fit);
  }
}
BENCHMARK(BM_FitShell)->Arg(20)->Arg(60)->Arg(200);

void BM_Detect(benchmark::State& state) {
  const auto& img = phantom(static_cast<std::size_t>(state.range(0))).image;
  for (auto _ : state) {
    auto rep = mcd::detect(img);
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_Detect)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
