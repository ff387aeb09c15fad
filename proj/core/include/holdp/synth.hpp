#pragma once

#include <cstdint>
#include <filesystem>

#include "holdp/eval.hpp"
#include "holdp/image.hpp"

namespace holdp {

struct SynthSpec {
  int classes = 10;
  int images_per_class = 20;
  int size = 64;
  std::uint64_t seed = 0;
  /// Per-image random gain and offset applied after texture synthesis.
  bool jitter = true;

  void validate() const;
};

/// Texture for image `index` of class `label`: an oriented sinusoid whose
/// angle and frequency depend on the class, a random phase, and smoothed
/// noise. Values are rounded to integers and clamped to 0..255.
GrayImage synth_texture(const SynthSpec& spec, int label, int index);

/// Writes every image as PGM plus `manifest.csv` into `out_dir`.
/// Returns the manifest (paths relative to out_dir resolved to absolute).
DatasetManifest write_synth_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace holdp
