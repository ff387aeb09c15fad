#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holdp/features.hpp"
#include "holdp/image.hpp"

namespace holdp {

struct ManifestEntry {
  std::filesystem::path path;
  std::string label;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::string name;
  std::vector<ManifestEntry> entries;

  /// Distinct labels in order of first appearance.
  std::vector<std::string> subjects() const;

  /// Needs at least 2 subjects with at least 2 images each.
  void validate() const;
};

/// Reads UTF-8 CSV `path,label` with an optional `path,label` header.
/// Relative paths are resolved against the manifest's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Writes `path,label` with a header. Paths are written as given.
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct SplitSpec {
  /// Images per subject used for training. When unset, train_fraction is used.
  std::optional<int> train_count;
  double train_fraction = 0.5;
  int repeats = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Indices into the manifest entries, each list ascending.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// One split per repeat. Repeat r is drawn from an engine seeded with
/// (seed, r) alone, so any repeat can be reproduced in isolation.
std::vector<Split> make_splits(const DatasetManifest& manifest, const SplitSpec& spec);

inline constexpr double kChiSquareEpsilon = 1e-10;

/// Sum of (a_k - b_k)^2 / (a_k + b_k + eps). ArgumentError on length mismatch.
double chi_square_distance(std::span<const double> a, std::span<const double> b);

struct NearestNeighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Minimum chi-square distance over the gallery; ties go to the earliest index.
NearestNeighbor nearest_neighbor(std::span<const std::vector<double>> gallery,
                                 std::span<const double> probe);

/// Label of the nearest gallery vector. ArgumentError on an empty gallery.
std::string classify_nn(std::span<const std::vector<double>> gallery,
                        std::span<const std::string> labels, std::span<const double> probe);

struct EvalReport {
  DescriptorConfig config;
  std::vector<double> accuracies;
  double mean = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single repeat.
  double stddev = 0.0;
  double wall_seconds = 0.0;
};

/// Sweep grid: HOLDP over orders x t values, AHOLDP over orders, plus baselines.
struct SweepSpec {
  std::vector<int> orders{1, 2, 3, 4};
  std::vector<int> t_values{2, 3, 4, 5, 6};
  bool adaptive = true;
  bool lbp = true;
  bool ldp = true;
  /// LDP baseline uses this t.
  int ldp_t = 3;
  std::vector<double> ltp_taus{2.0, 5.0};
  ResponseSource source = ResponseSource::PerDirectionPlane;
  Normalization norm = Normalization::L1;

  std::vector<DescriptorConfig> configs() const;
};

struct BenchmarkOptions {
  std::optional<ResizePolicy> resize = ResizePolicy{};
  unsigned threads = 0;
  /// Loader override, mainly for tests; defaults to load_image.
  std::function<GrayImage(const std::filesystem::path&)> loader;
};

/// Loads every image once, extracts every descriptor once, then scores each
/// repeat split by chi-square 1-NN.
std::vector<EvalReport> run_benchmark(const DatasetManifest& manifest, const SplitSpec& spec,
                                      std::span<const DescriptorConfig> configs,
                                      const BenchmarkOptions& options = {});

/// Same as run_benchmark on already-loaded images (labels[i] for images[i]).
std::vector<EvalReport> run_benchmark(std::span<const GrayImage> images,
                                      std::span<const std::string> labels,
                                      const SplitSpec& spec,
                                      std::span<const DescriptorConfig> configs,
                                      unsigned threads = 0);

/// Accuracy of one split given precomputed features.
double split_accuracy(std::span<const std::vector<double>> features,
                      std::span<const std::string> labels, const Split& split,
                      unsigned threads = 0);

/// Report JSON. Wall times are included only when `include_timing` is set,
/// which keeps seeded runs byte-identical by default.
std::string report_json(std::span<const EvalReport> reports, const SplitSpec& spec,
                        const std::string& dataset_name, bool include_timing = false);

/// Rows: orders; columns: t values, then "adaptive" when enabled.
std::string sweep_table_csv(std::span<const EvalReport> reports, const SweepSpec& sweep);

}  // namespace holdp
