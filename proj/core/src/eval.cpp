#include "holdp/eval.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "holdp/errors.hpp"
#include "holdp/parallel.hpp"

namespace holdp {

std::vector<std::string> DatasetManifest::subjects() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (std::find(out.begin(), out.end(), e.label) == out.end()) out.push_back(e.label);
  }
  return out;
}

namespace {

// Manifest indices per subject, subjects in order of first appearance.
std::vector<std::vector<std::size_t>> group_by_label(std::span<const std::string> labels) {
  std::vector<std::vector<std::size_t>> groups;
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(labels[i], groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return groups;
}

void validate_groups(const std::vector<std::vector<std::size_t>>& groups) {
  if (groups.size() < 2) throw ArgumentError("dataset needs at least 2 subjects");
  for (const auto& g : groups) {
    if (g.size() < 2) throw ArgumentError("every subject needs at least 2 images");
  }
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = 0;
  do {
    v = engine();
  } while (v >= limit);
  return v % n;
}

int train_size(const SplitSpec& spec, std::size_t total) {
  if (spec.train_count) return *spec.train_count;
  return static_cast<int>(std::lround(spec.train_fraction * static_cast<double>(total)));
}

std::vector<Split> make_label_splits(std::span<const std::string> labels, const SplitSpec& spec) {
  spec.validate();
  const auto groups = group_by_label(labels);
  validate_groups(groups);
  for (const auto& g : groups) {
    const int k = train_size(spec, g.size());
    if (k < 1 || k >= static_cast<int>(g.size())) {
      throw ArgumentError("cannot take " + std::to_string(k) + " training images from a subject with " +
                          std::to_string(g.size()));
    }
  }

  std::vector<Split> splits;
  splits.reserve(static_cast<std::size_t>(spec.repeats));
  for (int r = 0; r < spec.repeats; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(spec.seed >> 32), static_cast<std::uint32_t>(r)};
    std::mt19937_64 engine(seq);
    Split split;
    for (const auto& g : groups) {
      std::vector<std::size_t> members = g;
      const auto k = static_cast<std::size_t>(train_size(spec, g.size()));
      // Partial Fisher-Yates: the first k slots become the training draw.
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(bounded(engine, members.size() - i));
        std::swap(members[i], members[j]);
      }
      split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
      split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    splits.push_back(std::move(split));
  }
  return splits;
}

std::vector<std::string> manifest_labels(const DatasetManifest& manifest) {
  std::vector<std::string> labels;
  labels.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) labels.push_back(e.label);
  return labels;
}

}  // namespace

void DatasetManifest::validate() const {
  const auto labels = manifest_labels(*this);
  validate_groups(group_by_label(labels));
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  DatasetManifest manifest;
  manifest.name = path.stem().string();
  const auto base = path.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'path,label'");
    }
    std::string file = trim(line.substr(0, comma));
    std::string label = trim(line.substr(comma + 1));
    if (line_no == 1 && file == "path" && label == "label") continue;
    if (file.empty() || label.empty()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": empty path or label");
    }
    std::filesystem::path p(file);
    if (p.is_relative()) p = base / p;
    manifest.entries.push_back({p, label});
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "path,label\n";
  for (const auto& e : manifest.entries) out << e.path.string() << ',' << e.label << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void SplitSpec::validate() const {
  if (repeats < 1) throw ArgumentError("repeats must be >= 1");
  if (train_count && *train_count < 1) throw ArgumentError("train count must be >= 1");
  if (!train_count && !(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("train fraction must be in (0, 1)");
  }
}

std::vector<Split> make_splits(const DatasetManifest& manifest, const SplitSpec& spec) {
  const auto labels = manifest_labels(manifest);
  return make_label_splits(labels, spec);
}

double chi_square_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ArgumentError("chi-square: length mismatch " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    d += diff * diff / (a[k] + b[k] + kChiSquareEpsilon);
  }
  return d;
}

NearestNeighbor nearest_neighbor(std::span<const std::vector<double>> gallery,
                                 std::span<const double> probe) {
  if (gallery.empty()) throw ArgumentError("nearest neighbor: empty gallery");
  NearestNeighbor best{0, chi_square_distance(gallery[0], probe)};
  for (std::size_t i = 1; i < gallery.size(); ++i) {
    const double d = chi_square_distance(gallery[i], probe);
    if (d < best.distance) best = {i, d};
  }
  return best;
}

std::string classify_nn(std::span<const std::vector<double>> gallery,
                        std::span<const std::string> labels, std::span<const double> probe) {
  if (labels.size() != gallery.size()) throw ArgumentError("gallery and label counts differ");
  return labels[nearest_neighbor(gallery, probe).index];
}

double split_accuracy(std::span<const std::vector<double>> features,
                      std::span<const std::string> labels, const Split& split, unsigned threads) {
  if (split.train.empty()) throw ArgumentError("nearest neighbor: empty gallery");
  if (split.test.empty()) return 0.0;
  std::vector<char> correct(split.test.size(), 0);
  parallel_for(split.test.size(), threads, [&](std::size_t k) {
    const auto& probe = features[split.test[k]];
    std::size_t best = split.train.front();
    double best_d = chi_square_distance(features[best], probe);
    for (std::size_t m = 1; m < split.train.size(); ++m) {
      const std::size_t idx = split.train[m];
      const double d = chi_square_distance(features[idx], probe);
      if (d < best_d) {
        best_d = d;
        best = idx;
      }
    }
    correct[k] = labels[best] == labels[split.test[k]];
  });
  const auto hits = std::count(correct.begin(), correct.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(split.test.size());
}

std::vector<DescriptorConfig> SweepSpec::configs() const {
  std::vector<DescriptorConfig> out;
  for (const int n : orders) {
    for (const int t : t_values) out.push_back(DescriptorConfig::holdp(n, t, norm, source));
  }
  if (adaptive) {
    for (const int n : orders) out.push_back(DescriptorConfig::aholdp(n, norm, source));
  }
  if (lbp) out.push_back(DescriptorConfig::lbp(norm));
  if (ldp) out.push_back(DescriptorConfig::ldp(ldp_t, norm));
  for (const double tau : ltp_taus) out.push_back(DescriptorConfig::ltp(tau, norm));
  for (const auto& c : out) c.validate();
  return out;
}

std::vector<EvalReport> run_benchmark(std::span<const GrayImage> images,
                                      std::span<const std::string> labels, const SplitSpec& spec,
                                      std::span<const DescriptorConfig> configs, unsigned threads) {
  if (images.size() != labels.size()) throw ArgumentError("image and label counts differ");
  for (const auto& c : configs) c.validate();
  const auto splits = make_label_splits(labels, spec);

  std::vector<EvalReport> reports;
  reports.reserve(configs.size());
  for (const auto& config : configs) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> features(images.size());
    parallel_for(images.size(), threads,
                 [&](std::size_t i) { features[i] = extract(images[i], config).values; });

    EvalReport report;
    report.config = config;
    for (const auto& split : splits) {
      report.accuracies.push_back(split_accuracy(features, labels, split, threads));
    }
    const double n = static_cast<double>(report.accuracies.size());
    report.mean = std::accumulate(report.accuracies.begin(), report.accuracies.end(), 0.0) / n;
    if (report.accuracies.size() > 1) {
      double ss = 0.0;
      for (const double a : report.accuracies) ss += (a - report.mean) * (a - report.mean);
      report.stddev = std::sqrt(ss / (n - 1.0));
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<EvalReport> run_benchmark(const DatasetManifest& manifest, const SplitSpec& spec,
                                      std::span<const DescriptorConfig> configs,
                                      const BenchmarkOptions& options) {
  manifest.validate();
  spec.validate();
  const auto labels = manifest_labels(manifest);
  make_label_splits(labels, spec);  // reject infeasible specs before any image I/O

  std::vector<std::optional<GrayImage>> loaded(manifest.entries.size());
  parallel_for(manifest.entries.size(), options.threads, [&](std::size_t i) {
    GrayImage img = options.loader ? options.loader(manifest.entries[i].path)
                                   : load_image(manifest.entries[i].path);
    loaded[i] = options.resize ? resize(img, *options.resize) : std::move(img);
  });
  std::vector<GrayImage> images;
  images.reserve(loaded.size());
  for (auto& img : loaded) images.push_back(std::move(*img));
  return run_benchmark(images, labels, spec, configs, options.threads);
}

}  // namespace holdp
