#include "holdp/patterns.hpp"

#include <algorithm>
#include <string>

#include "holdp/errors.hpp"

namespace holdp {

RingLayout ring_positions(int layer) {
  if (layer < 1) throw ArgumentError("ring layer must be >= 1, got " + std::to_string(layer));
  RingLayout ring;
  ring.layer = layer;
  ring.offsets.reserve(static_cast<std::size_t>(8 * layer));
  // Walk the square counterclockwise (y down): up the east side, across the
  // top, down the west side, across the bottom, back up to just below East.
  int dx = layer;
  int dy = 0;
  auto step = [&](int sx, int sy, int count) {
    for (int k = 0; k < count; ++k) {
      ring.offsets.push_back({dx, dy});
      dx += sx;
      dy += sy;
    }
  };
  step(0, -1, layer);
  step(-1, 0, 2 * layer);
  step(0, 1, 2 * layer);
  step(1, 0, 2 * layer);
  step(0, -1, layer);
  return ring;
}

void CodeConfig::validate() const {
  if (order < 1) throw ArgumentError("order must be >= 1, got " + std::to_string(order));
  if (mode == ThresholdMode::Prominent && (t < 1 || t > 7)) {
    throw ArgumentError("t must be in 1..7, got " + std::to_string(t));
  }
}

std::string_view to_string(ResponseSource source) {
  return source == ResponseSource::PerDirectionPlane ? "per-direction" : "max";
}

ResponseSource parse_response_source(std::string_view text) {
  if (text == "per-direction") return ResponseSource::PerDirectionPlane;
  if (text == "max") return ResponseSource::MaxPlane;
  throw ArgumentError("unknown response source '" + std::string(text) + "'");
}

namespace {

using Values = std::array<double, kDirections>;

// Sums of the 2*layer-1 ring samples per direction. `planes[i]` is the plane
// direction i samples from, row-major with the given width.
Values directional_sums(const std::array<const double*, kDirections>& planes, int width,
                        const RingLayout& ring, Pixel center) {
  const int layer = ring.layer;
  Values sums{};
  for (int i = 0; i < kDirections; ++i) {
    const double* plane = planes[static_cast<std::size_t>(i)];
    double s = 0.0;
    for (int j = -(layer - 1); j <= layer - 1; ++j) {
      const Offset o = ring.offsets[static_cast<std::size_t>(ring_sample_index(layer, i, j))];
      s += plane[static_cast<std::size_t>(center.y + o.dy) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(center.x + o.dx)];
    }
    sums[static_cast<std::size_t>(i)] = s;
  }
  return sums;
}

std::array<const double*, kDirections> sample_planes(const ResponseStack& stack,
                                                     ResponseSource source,
                                                     const std::vector<double>& max_plane) {
  std::array<const double*, kDirections> planes{};
  for (int i = 0; i < kDirections; ++i) {
    planes[static_cast<std::size_t>(i)] =
        source == ResponseSource::MaxPlane ? max_plane.data() : stack.plane(i).data();
  }
  return planes;
}

void check_interior(int width, int height, Pixel center, int margin) {
  if (center.x < margin || center.y < margin || center.x >= width - margin ||
      center.y >= height - margin) {
    throw RangeError("pixel (" + std::to_string(center.x) + "," + std::to_string(center.y) +
                     ") is closer than " + std::to_string(margin) + " to the border");
  }
}

}  // namespace

DirectionalResponses directional_responses(const ResponseStack& stack, Pixel center, int layer,
                                           ResponseSource source) {
  const RingLayout ring = ring_positions(layer);
  check_interior(stack.width(), stack.height(), center, layer);
  const std::vector<double> max_plane =
      source == ResponseSource::MaxPlane ? stack.max_plane() : std::vector<double>{};
  const Values sums =
      directional_sums(sample_planes(stack, source, max_plane), stack.width(), ring, center);
  DirectionalResponses out;
  out.layer = layer;
  const double count = 2.0 * layer - 1.0;
  for (std::size_t i = 0; i < sums.size(); ++i) out.values[i] = sums[i] / count;
  return out;
}

std::uint8_t holdp_code(std::span<const double, kDirections> values, int t) {
  if (t < 1 || t > kDirections) throw ArgumentError("t must be in 1..8, got " + std::to_string(t));
  Values sorted{};
  std::copy(values.begin(), values.end(), sorted.begin());
  std::nth_element(sorted.begin(), sorted.begin() + (t - 1), sorted.end(), std::greater<>());
  const double threshold = sorted[static_cast<std::size_t>(t - 1)];
  std::uint8_t code = 0;
  for (int i = 0; i < kDirections; ++i) {
    if (values[static_cast<std::size_t>(i)] >= threshold) code |= static_cast<std::uint8_t>(1u << i);
  }
  return code;
}

std::uint8_t aholdp_code(std::span<const double, kDirections> values) {
  Values sorted{};
  std::copy(values.begin(), values.end(), sorted.begin());
  std::sort(sorted.begin(), sorted.end());
  // v >= (a + b) / 2  <=>  2v >= a + b, without the halving.
  const double twice_median = sorted[3] + sorted[4];
  std::uint8_t code = 0;
  for (int i = 0; i < kDirections; ++i) {
    if (2.0 * values[static_cast<std::size_t>(i)] >= twice_median) {
      code |= static_cast<std::uint8_t>(1u << i);
    }
  }
  return code;
}

std::uint8_t lbp_code(const GrayImage& img, Pixel center) {
  check_interior(img.width(), img.height(), center, 1);
  static const RingLayout ring = ring_positions(1);
  const double c = img.at(center.x, center.y);
  std::uint8_t code = 0;
  for (int p = 0; p < kDirections; ++p) {
    const Offset o = ring.offsets[static_cast<std::size_t>(p)];
    if (img.at(center.x + o.dx, center.y + o.dy) >= c) code |= static_cast<std::uint8_t>(1u << p);
  }
  return code;
}

LtpCodes ltp_codes(const GrayImage& img, Pixel center, double tau) {
  if (!(tau >= 0.0)) throw ArgumentError("tau must be >= 0");
  check_interior(img.width(), img.height(), center, 1);
  static const RingLayout ring = ring_positions(1);
  const double c = img.at(center.x, center.y);
  LtpCodes codes;
  for (int p = 0; p < kDirections; ++p) {
    const Offset o = ring.offsets[static_cast<std::size_t>(p)];
    const double d = img.at(center.x + o.dx, center.y + o.dy);
    if (d >= c + tau) {
      codes.positive |= static_cast<std::uint8_t>(1u << p);
    } else if (d <= c - tau) {
      codes.negative |= static_cast<std::uint8_t>(1u << p);
    }
  }
  return codes;
}

std::uint8_t ldp_code(const ResponseStack& stack, Pixel center, int t) {
  return holdp_code(directional_responses(stack, center, 1, ResponseSource::PerDirectionPlane), t);
}

namespace {

void check_min_size(const GrayImage& img, int margin) {
  const int need = 2 * margin + 1;
  if (img.width() < need || img.height() < need) {
    throw ArgumentError("image " + std::to_string(img.width()) + "x" +
                        std::to_string(img.height()) + " is smaller than " + std::to_string(need) +
                        "x" + std::to_string(need));
  }
}

PatternMap empty_map(const GrayImage& img, int layer) {
  PatternMap map;
  map.layer = layer;
  map.width = img.width();
  map.height = img.height();
  map.codes.assign(img.size(), 0);
  return map;
}

}  // namespace

std::vector<PatternMap> encode_pattern_maps(const GrayImage& img, const CodeConfig& config) {
  config.validate();
  const int n = config.order;
  check_min_size(img, n);

  const GrayImage padded = pad(img, n);
  const ResponseStack stack = kirsch_filter(padded);
  const std::vector<double> max_plane =
      config.source == ResponseSource::MaxPlane ? stack.max_plane() : std::vector<double>{};
  const auto planes = sample_planes(stack, config.source, max_plane);

  std::vector<PatternMap> maps;
  maps.reserve(static_cast<std::size_t>(n));
  for (int layer = 1; layer <= n; ++layer) {
    const RingLayout ring = ring_positions(layer);
    PatternMap map = empty_map(img, layer);
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        // Sums rank and compare exactly like means (common positive divisor).
        const Values sums = directional_sums(planes, stack.width(), ring, {x + n, y + n});
        const std::span<const double, kDirections> view(sums);
        map.codes[static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width()) +
                  static_cast<std::size_t>(x)] =
            config.mode == ThresholdMode::Prominent ? holdp_code(view, config.t)
                                                    : aholdp_code(view);
      }
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

PatternMap lbp_map(const GrayImage& img) {
  const GrayImage padded = pad(img, 1);
  PatternMap map = empty_map(img, 1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      map.codes[static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width()) +
                static_cast<std::size_t>(x)] = lbp_code(padded, {x + 1, y + 1});
    }
  }
  return map;
}

std::pair<PatternMap, PatternMap> ltp_maps(const GrayImage& img, double tau) {
  const GrayImage padded = pad(img, 1);
  PatternMap pos = empty_map(img, 1);
  PatternMap neg = empty_map(img, 1);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const LtpCodes c = ltp_codes(padded, {x + 1, y + 1}, tau);
      const std::size_t k =
          static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width()) +
          static_cast<std::size_t>(x);
      pos.codes[k] = c.positive;
      neg.codes[k] = c.negative;
    }
  }
  return {std::move(pos), std::move(neg)};
}

PatternMap ldp_map(const GrayImage& img, int t) {
  CodeConfig config;
  config.order = 1;
  config.t = t;
  return std::move(encode_pattern_maps(img, config).front());
}

}  // namespace holdp
