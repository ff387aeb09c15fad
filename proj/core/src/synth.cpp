#include "holdp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "holdp/errors.hpp"

namespace holdp {

void SynthSpec::validate() const {
  if (classes < 2) throw ArgumentError("synth needs at least 2 classes");
  if (images_per_class < 2) throw ArgumentError("synth needs at least 2 images per class");
  if (size < 8) throw ArgumentError("synth image size must be >= 8");
}

GrayImage synth_texture(const SynthSpec& spec, int label, int index) {
  constexpr double kAmplitude = 40.0;
  constexpr double kNoiseSigma = 70.0;
  constexpr double kAngleJitter = 0.3;
  constexpr double kFreqJitter = 0.35;

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(label), static_cast<std::uint32_t>(index)};
  std::mt19937_64 engine(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, kNoiseSigma);

  // Orientation walks half a turn across classes; frequency is a coprime
  // stride so neighbouring orientations also differ in scale.
  const int stride = 7 % spec.classes == 0 ? 1 : 7;
  const double theta = std::numbers::pi * label / spec.classes +
                       kAngleJitter * (2.0 * unit(engine) - 1.0);
  const double freq =
      (0.05 + 0.15 * static_cast<double>((label * stride) % spec.classes) / spec.classes) *
      (1.0 + kFreqJitter * (2.0 * unit(engine) - 1.0));
  const double phase = 2.0 * std::numbers::pi * unit(engine);
  const double gain = spec.jitter ? 0.75 + 0.5 * unit(engine) : 1.0;
  const double offset = spec.jitter ? -20.0 + 40.0 * unit(engine) : 0.0;

  const int n = spec.size;
  GrayImage noise(n + 2, n + 2);
  for (double& v : noise.pixels()) v = gauss(engine);

  GrayImage img(n, n);
  const double cx = std::cos(theta);
  const double sy = std::sin(theta);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double smooth = 0.0;
      for (int dy = 0; dy < 3; ++dy) {
        for (int dx = 0; dx < 3; ++dx) smooth += noise.at(x + dx, y + dy);
      }
      smooth /= 9.0;
      const double wave =
          kAmplitude * std::sin(2.0 * std::numbers::pi * freq * (x * cx - y * sy) + phase);
      const double v = gain * (128.0 + wave + smooth) + offset;
      img.at(x, y) = std::clamp(std::round(v), 0.0, 255.0);
    }
  }
  return img;
}

DatasetManifest write_synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir) {
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  DatasetManifest manifest;
  manifest.name = out_dir.filename().string();
  DatasetManifest relative = manifest;
  for (int c = 0; c < spec.classes; ++c) {
    const std::string label = "class" + std::to_string(c);
    for (int i = 0; i < spec.images_per_class; ++i) {
      const std::string file = label + "_" + std::to_string(i) + ".pgm";
      save_pgm(synth_texture(spec, c, i), out_dir / file);
      manifest.entries.push_back({out_dir / file, label});
      relative.entries.push_back({file, label});
    }
  }
  save_manifest(relative, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace holdp
