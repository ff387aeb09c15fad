#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "holdp/image.hpp"
#include "holdp/kirsch.hpp"

namespace holdp {

struct Offset {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

/// The 8*layer pixels at Chebyshev distance `layer` from a center, ordered
/// counterclockwise starting East at (layer, 0). Offset index g*layer lies
/// on the compass direction g*45 degrees.
struct RingLayout {
  int layer = 1;
  std::vector<Offset> offsets;
};

RingLayout ring_positions(int layer);

/// Ring index of the j-th sample averaged for direction i on `layer`,
/// j in [-(layer-1), layer-1].
inline int ring_sample_index(int layer, int direction, int j) {
  const int count = 8 * layer;
  return ((layer * direction + j) % count + count) % count;
}

/// Where ring samples are read from.
enum class ResponseSource {
  /// Direction i averages samples of plane i.
  PerDirectionPlane,
  /// Every direction averages samples of the pointwise-max plane.
  MaxPlane,
};

enum class ThresholdMode {
  /// Bits set for values >= the t-th largest.
  Prominent,
  /// Bits set for values >= the median of the eight values.
  AdaptiveMedian,
};

struct CodeConfig {
  int order = 1;
  ThresholdMode mode = ThresholdMode::Prominent;
  int t = 3;
  ResponseSource source = ResponseSource::PerDirectionPlane;

  /// Throws ArgumentError when order < 1 or, in prominent mode, t is outside 1..7.
  void validate() const;
};

std::string_view to_string(ResponseSource source);
ResponseSource parse_response_source(std::string_view text);

struct DirectionalResponses {
  int layer = 1;
  std::array<double, kDirections> values{};
};

/// Mean of the 2*layer-1 ring samples around each compass direction.
/// `center` is in stack coordinates and must be at least `layer` pixels from
/// every border (RangeError otherwise).
DirectionalResponses directional_responses(const ResponseStack& stack, Pixel center, int layer,
                                           ResponseSource source);

/// Bit i set iff values[i] >= the t-th largest value; t in 1..8.
std::uint8_t holdp_code(std::span<const double, kDirections> values, int t);

/// Bit i set iff values[i] >= median, the median being the mean of the
/// 4th and 5th order statistics.
std::uint8_t aholdp_code(std::span<const double, kDirections> values);

inline std::uint8_t holdp_code(const DirectionalResponses& r, int t) {
  return holdp_code(std::span<const double, kDirections>(r.values), t);
}
inline std::uint8_t aholdp_code(const DirectionalResponses& r) {
  return aholdp_code(std::span<const double, kDirections>(r.values));
}

/// Bit p set iff the layer-1 ring neighbor p is >= the center.
/// `center` must be at least 1 pixel from every border.
std::uint8_t lbp_code(const GrayImage& img, Pixel center);

struct LtpCodes {
  std::uint8_t positive = 0;
  std::uint8_t negative = 0;

  friend bool operator==(const LtpCodes&, const LtpCodes&) = default;
};

/// Ternary coding with dead zone: +1 if d >= c + tau, -1 if d <= c - tau.
/// At tau == 0 a tie maps to +1.
LtpCodes ltp_codes(const GrayImage& img, Pixel center, double tau);

/// Layer-1 prominent-direction code at `center` of a filtered stack.
std::uint8_t ldp_code(const ResponseStack& stack, Pixel center, int t);

/// Per-pixel codes of one layer, covering every pixel of the source image.
struct PatternMap {
  int layer = 1;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> codes;

  std::uint8_t at(int x, int y) const {
    return codes[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(x)];
  }

  friend bool operator==(const PatternMap&, const PatternMap&) = default;
};

/// HOLDP / AHOLDP maps for layers 1..order. The image is replicate-padded by
/// `order` before filtering. Requires an image of at least (2n+1)x(2n+1).
std::vector<PatternMap> encode_pattern_maps(const GrayImage& img, const CodeConfig& config);

PatternMap lbp_map(const GrayImage& img);
std::pair<PatternMap, PatternMap> ltp_maps(const GrayImage& img, double tau);
PatternMap ldp_map(const GrayImage& img, int t);

}  // namespace holdp
