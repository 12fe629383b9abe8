// mcd: command-line front end for the detection library.
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mcd/evaluation.hpp"
#include "mcd/phantom.hpp"
#include "mcd/pipeline.hpp"
#include "mcd/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kInputError = 1;
constexpr int kInternalError = 2;

struct EnhanceArgs {
  std::string in, out;
  double gain = mcd::kDefaultGain;
  int levels = 0;
  std::string dump_dir;
};

struct DetectArgs {
  std::string in, report, overlay, config, dump_dir, trace_dir;
  std::optional<double> pitch;
};

struct PhantomArgs {
  std::string out;
  int count = 1;
  std::uint64_t seed = 0;
  int nodules = 8;
  int lines = 4;
  double noise = 10.0;
  std::size_t width = 512;
  std::size_t height = 512;
};

struct FrocArgs {
  std::string reports, truths, out;
};

void run_enhance(const EnhanceArgs& a) {
  const auto image = mcd::load_pgm(a.in);
  const int cap = mcd::max_decimated_levels(image.width(), image.height());
  const int levels = a.levels > 0 ? a.levels : std::min(10, cap);
  if (a.gain <= 0.0) throw mcd::ArgumentError("--gain must be > 0");
  const auto pyr = mcd::dwt2_forward(image, levels);
  if (!a.dump_dir.empty()) mcd::dump_pyramid(pyr, a.dump_dir);
  const auto enhanced = image.with_pixels(mcd::dwt2_inverse(mcd::enhance(pyr, a.gain)));
  const double maxval = std::ldexp(1.0, image.bit_depth()) - 1.0;
  mcd::save_pgm(mcd::normalize(enhanced, 0.0, maxval), a.out);
}

void run_detect(const DetectArgs& a) {
  mcd::PipelineConfig config;
  if (!a.config.empty()) config = mcd::load_config(a.config);
  if (a.pitch) config.pixel_pitch_mm = *a.pitch;
  const auto image = mcd::load_pgm(a.in, config.pixel_pitch_mm);

  mcd::DetectDebug debug;
  if (!a.dump_dir.empty()) debug.dump_dir = a.dump_dir;
  if (!a.trace_dir.empty()) debug.trace_dir = a.trace_dir;
  const auto report = mcd::detect(image, config, a.in, debug);

  if (a.report.empty()) {
    std::cout << mcd::report_to_json(report);
  } else {
    mcd::write_report(report, a.report);
  }
  if (!a.overlay.empty()) {
    std::vector<mcd::OverlayCircle> circles;
    for (const auto& d : report.accepted()) circles.push_back({d.center.x, d.center.y, d.radius});
    const auto result = mcd::render_overlay(image, circles);
    mcd::save_ppm(result.image, a.overlay);
  }
  std::cerr << report.counts.accepted << " accepted of " << report.detections.size()
            << " fits\n";
}

void run_phantom(const PhantomArgs& a) {
  if (a.count < 1) throw mcd::ArgumentError("--count must be >= 1");
  fs::create_directories(a.out);
  mcd::PhantomConfig config;
  config.width = a.width;
  config.height = a.height;
  config.nodules = a.nodules;
  config.lines = a.lines;
  config.noise_sigma = a.noise;
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
    const auto ph = mcd::generate_phantom(config, seed);
    char stem[32];
    std::snprintf(stem, sizeof stem, "phantom_%04d", i);
    mcd::save_pgm(ph.image, fs::path(a.out) / (std::string(stem) + ".pgm"));
    mcd::write_truths(ph, fs::path(a.out) / (std::string(stem) + ".truth.json"));
  }
}

// Report <stem>.json pairs with truth <stem>.truth.json.
void run_froc(const FrocArgs& a) {
  std::map<std::string, fs::path> reports;
  for (const auto& entry : fs::directory_iterator(a.reports)) {
    if (entry.path().extension() == ".json") reports.emplace(entry.path().stem().string(), entry.path());
  }
  std::vector<mcd::EvaluatedCase> cases;
  for (const auto& [stem, path] : reports) {
    const auto truth = fs::path(a.truths) / (stem + ".truth.json");
    if (!fs::exists(truth)) throw mcd::IoError("no truth file " + truth.string());
    cases.push_back({mcd::read_report(path), mcd::read_truths(truth)});
  }
  const auto sweep = mcd::default_sweep();
  const auto curve = mcd::froc_curve(cases, sweep);
  std::ofstream out(a.out);
  if (!out) throw mcd::IoError("cannot write " + a.out);
  out << "fp_per_image,tp_ratio,cd,rst\n";
  out.precision(17);
  for (const auto& p : curve) {
    out << p.fp_per_image << ',' << p.tp_ratio << ',' << p.cd << ',' << p.rst << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microcalcification detection in mammogram PGM images"};
  app.require_subcommand(1);

  EnhanceArgs ea;
  auto* enhance = app.add_subcommand("enhance", "Wavelet detail enhancement");
  enhance->add_option("in", ea.in, "Input PGM")->required()->check(CLI::ExistingFile);
  enhance->add_option("out", ea.out, "Output PGM")->required();
  enhance->add_option("--gain", ea.gain, "Detail gain")->capture_default_str();
  enhance->add_option("--levels", ea.levels, "Decomposition levels (0 = automatic)");
  enhance->add_option("--dump-dir", ea.dump_dir, "Write every subband as PGM here");

  DetectArgs da;
  auto* detect = app.add_subcommand("detect", "Run the detection pipeline");
  detect->add_option("in", da.in, "Input PGM")->required()->check(CLI::ExistingFile);
  detect->add_option("--report", da.report, "Report path (default: stdout)");
  detect->add_option("--overlay", da.overlay, "Overlay PPM of accepted detections");
  detect->add_option("--config", da.config, "Config JSON")->check(CLI::ExistingFile);
  detect->add_option("--pitch", da.pitch, "Pixel pitch in mm (overrides config)");
  detect->add_option("--dump-dir", da.dump_dir, "Write enhanced, ROI and edge images here");
  detect->add_option("--trace-dir", da.trace_dir, "Write one FCS trace CSV per group here");

  PhantomArgs pa;
  auto* phantom = app.add_subcommand("phantom", "Generate synthetic phantoms with truth");
  phantom->add_option("--out", pa.out, "Output directory")->required();
  phantom->add_option("--count", pa.count, "Number of phantoms")->capture_default_str();
  phantom->add_option("--seed", pa.seed, "Seed of the first phantom")->capture_default_str();
  phantom->add_option("--nodules", pa.nodules)->capture_default_str();
  phantom->add_option("--lines", pa.lines)->capture_default_str();
  phantom->add_option("--noise", pa.noise, "Noise sigma")->capture_default_str();
  phantom->add_option("--width", pa.width)->capture_default_str();
  phantom->add_option("--height", pa.height)->capture_default_str();

  FrocArgs fa;
  auto* froc = app.add_subcommand("froc", "FROC curve over a batch of reports");
  froc->add_option("--reports", fa.reports, "Directory of report JSON files")
      ->required()->check(CLI::ExistingDirectory);
  froc->add_option("--truths", fa.truths, "Directory of truth files")
      ->required()->check(CLI::ExistingDirectory);
  froc->add_option("--out", fa.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*enhance) run_enhance(ea);
    if (*detect) run_detect(da);
    if (*phantom) run_phantom(pa);
    if (*froc) run_froc(fa);
  } catch (const mcd::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternalError;
  } catch (const mcd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return 0;
}
