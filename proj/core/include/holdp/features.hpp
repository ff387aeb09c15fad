#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holdp/image.hpp"
#include "holdp/patterns.hpp"

namespace holdp {

inline constexpr std::size_t kBins = 256;

enum class DescriptorKind { LBP, LTP, LDP, HOLDP, AHOLDP };

enum class Normalization {
  /// Each layer histogram sums to 1 before concatenation.
  L1,
  Raw,
};

std::string_view to_string(DescriptorKind kind);
DescriptorKind parse_descriptor_kind(std::string_view text);
std::string_view to_string(Normalization norm);
Normalization parse_normalization(std::string_view text);

/// Everything that determines a feature vector apart from the image.
/// Fields irrelevant to `kind` are ignored by extraction and by fingerprint().
struct DescriptorConfig {
  DescriptorKind kind = DescriptorKind::HOLDP;
  int order = 1;
  int t = 3;
  double tau = 0.0;
  ResponseSource source = ResponseSource::PerDirectionPlane;
  Normalization norm = Normalization::L1;

  static DescriptorConfig lbp(Normalization norm = Normalization::L1);
  static DescriptorConfig ltp(double tau, Normalization norm = Normalization::L1);
  static DescriptorConfig ldp(int t, Normalization norm = Normalization::L1);
  static DescriptorConfig holdp(int order, int t, Normalization norm = Normalization::L1,
                                ResponseSource source = ResponseSource::PerDirectionPlane);
  static DescriptorConfig aholdp(int order, Normalization norm = Normalization::L1,
                                 ResponseSource source = ResponseSource::PerDirectionPlane);

  void validate() const;

  /// Encoder settings for HOLDP/AHOLDP (LDP maps to order 1 prominent).
  CodeConfig code_config() const;

  std::size_t vector_length() const;

  /// Canonical text form, e.g. "HOLDP;order=2;t=3;source=per-direction;norm=l1".
  std::string fingerprint() const;
  static DescriptorConfig from_fingerprint(std::string_view text);

  /// Short human label, e.g. "HOLDP2_t3".
  std::string label() const;

  friend bool operator==(const DescriptorConfig& a, const DescriptorConfig& b) {
    return a.fingerprint() == b.fingerprint();
  }
};

struct LayerHistogram {
  int layer = 1;
  std::array<double, kBins> bins{};

  double total() const;
};

LayerHistogram histogram(const PatternMap& map);

struct FeatureVector {
  DescriptorConfig config;
  std::vector<double> values;
};

/// HOLDP/AHOLDP: per-layer histograms for layers 1..order, concatenated in
/// layer order and normalized per `norm`.
FeatureVector extract_descriptor(const GrayImage& img, const CodeConfig& config,
                                 Normalization norm = Normalization::L1);

/// Any descriptor kind.
FeatureVector extract(const GrayImage& img, const DescriptorConfig& config);

struct FeatureRecord {
  std::string label;
  std::vector<double> values;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

/// Records sharing one descriptor configuration.
struct FeatureSet {
  DescriptorConfig config;
  std::vector<FeatureRecord> records;

  /// Throws FormatError when a record length differs from the config's.
  void validate() const;
};

enum class FeatureFormat { Binary, Csv };

FeatureFormat feature_format_for(const std::filesystem::path& path);

void save_features(const std::filesystem::path& path, const FeatureSet& set,
                   FeatureFormat format);
inline void save_features(const std::filesystem::path& path, const FeatureSet& set) {
  save_features(path, set, feature_format_for(path));
}

/// Detects the format from the file contents. When `expected` is given, its
/// fingerprint must match the file's or FormatError is thrown.
FeatureSet load_features(const std::filesystem::path& path,
                         const std::optional<DescriptorConfig>& expected = std::nullopt);

}  // namespace holdp
