#include <bit>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "holdp/errors.hpp"
#include "holdp/patterns.hpp"
#include "oracles.hpp"

namespace holdp {
namespace {

using Values = std::array<double, 8>;

std::uint8_t prominent(const Values& v, int t) {
  return holdp_code(std::span<const double, 8>(v), t);
}
std::uint8_t adaptive(const Values& v) { return aholdp_code(std::span<const double, 8>(v)); }

// 3x3 image with `center` and the eight neighbours given in ring order.
GrayImage patch(double center, const Values& ring) {
  GrayImage img(3, 3, 0.0);
  img.at(1, 1) = center;
  for (int p = 0; p < 8; ++p) {
    img.at(1 + oracle::kRing1[p].first, 1 + oracle::kRing1[p].second) = ring[p];
  }
  return img;
}

// Plane d at (x, y) holds a value unique to (d, x, y).
ResponseStack labelled_stack(int w, int h) {
  ResponseStack s(w, h);
  for (int d = 0; d < 8; ++d) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) s.at(d, x, y) = 10000.0 * d + 100.0 * y + x;
    }
  }
  return s;
}

TEST(RingPositions, LayerOne) {
  const RingLayout r = ring_positions(1);
  const std::vector<Offset> expected = {{1, 0},  {1, -1}, {0, -1}, {-1, -1},
                                        {-1, 0}, {-1, 1}, {0, 1},  {1, 1}};
  EXPECT_EQ(r.offsets, expected);
}

TEST(RingPositions, LayerTwoCornerAlignment) {
  const RingLayout r = ring_positions(2);
  ASSERT_EQ(r.offsets.size(), 16u);
  EXPECT_EQ(r.offsets[0], (Offset{2, 0}));
  EXPECT_EQ(r.offsets[2], (Offset{2, -2}));
  EXPECT_EQ(r.offsets[4], (Offset{0, -2}));
  EXPECT_EQ(r.offsets[8], (Offset{-2, 0}));
  EXPECT_EQ(r.offsets[12], (Offset{0, 2}));
}

TEST(RingPositions, MatchesAngularSortOracle) {
  for (int layer = 1; layer <= 6; ++layer) {
    const RingLayout r = ring_positions(layer);
    const auto expected = oracle::ring_by_angle(layer);
    ASSERT_EQ(r.offsets.size(), expected.size());
    std::set<std::pair<int, int>> seen;
    for (std::size_t g = 0; g < expected.size(); ++g) {
      EXPECT_EQ(r.offsets[g].dx, expected[g].first);
      EXPECT_EQ(r.offsets[g].dy, expected[g].second);
      EXPECT_EQ(std::max(std::abs(r.offsets[g].dx), std::abs(r.offsets[g].dy)), layer);
      seen.emplace(r.offsets[g].dx, r.offsets[g].dy);
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(8 * layer));
    for (int g = 0; g < 8; ++g) {
      const Offset o = r.offsets[static_cast<std::size_t>(g * layer)];
      EXPECT_EQ(o.dx, layer * oracle::kRing1[g].first);
      EXPECT_EQ(o.dy, layer * oracle::kRing1[g].second);
    }
  }
}

TEST(RingPositions, RejectsLayerZero) { EXPECT_THROW(ring_positions(0), ArgumentError); }

TEST(RingSampleIndex, MatchesEnumeration) {
  for (int n = 1; n <= 4; ++n) {
    for (int i = 0; i < 8; ++i) {
      std::vector<int> got;
      for (int j = -(n - 1); j <= n - 1; ++j) got.push_back(ring_sample_index(n, i, j));
      EXPECT_EQ(got, oracle::direction_indices(n, i));
      EXPECT_EQ(std::set<int>(got.begin(), got.end()).size(), static_cast<std::size_t>(2 * n - 1));
    }
  }
  EXPECT_EQ(ring_sample_index(2, 0, -1), 15);
  EXPECT_EQ(ring_sample_index(2, 6, -1), 11);
  EXPECT_EQ(ring_sample_index(3, 6, 2), 20);
}

TEST(DirectionalResponses, LayerOneIsSingleSample) {
  const ResponseStack s = labelled_stack(7, 7);
  const auto r = directional_responses(s, {3, 3}, 1, ResponseSource::PerDirectionPlane);
  const RingLayout ring = ring_positions(1);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(r.values[i], s.at(i, 3 + ring.offsets[i].dx, 3 + ring.offsets[i].dy));
  }
}

TEST(DirectionalResponses, LayerTwoEastAveragesThreeSamples) {
  const ResponseStack s = labelled_stack(7, 7);
  const auto p = [&](int g) {
    const Offset o = ring_positions(2).offsets[static_cast<std::size_t>(g)];
    return s.at(0, 3 + o.dx, 3 + o.dy);
  };
  const auto r = directional_responses(s, {3, 3}, 2, ResponseSource::PerDirectionPlane);
  EXPECT_DOUBLE_EQ(r.values[0], (p(15) + p(0) + p(1)) / 3.0);
}

TEST(DirectionalResponses, LayerThreeSouthAveragesFiveSamples) {
  const ResponseStack s = labelled_stack(9, 9);
  const auto p = [&](int g) {
    const Offset o = ring_positions(3).offsets[static_cast<std::size_t>(g)];
    return s.at(6, 4 + o.dx, 4 + o.dy);
  };
  const auto r = directional_responses(s, {4, 4}, 3, ResponseSource::PerDirectionPlane);
  EXPECT_DOUBLE_EQ(r.values[6], (p(16) + p(17) + p(18) + p(19) + p(20)) / 5.0);
  EXPECT_EQ(ring_positions(3).offsets[18], (Offset{0, 3}));
}

TEST(DirectionalResponses, MaxPlaneSource) {
  std::mt19937_64 rng(31);
  const GrayImage img = oracle::random_image(rng, 11, 11);
  const ResponseStack s = kirsch_filter(img);
  const auto r = directional_responses(s, {5, 5}, 2, ResponseSource::MaxPlane);
  const auto expected = oracle::responses(img, 5, 5, 2, true);
  for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(r.values[i], expected[i]);
}

TEST(DirectionalResponses, BorderIsRangeError) {
  const ResponseStack s = labelled_stack(5, 5);
  EXPECT_THROW(directional_responses(s, {1, 2}, 2, ResponseSource::PerDirectionPlane), RangeError);
  EXPECT_THROW(directional_responses(s, {2, 4}, 1, ResponseSource::PerDirectionPlane), RangeError);
  EXPECT_NO_THROW(directional_responses(s, {2, 2}, 2, ResponseSource::PerDirectionPlane));
}

TEST(DirectionalResponses, LayerOneEqualsDirectCorrelations) {
  std::mt19937_64 rng(32);
  const GrayImage img = oracle::random_image(rng, 12, 12);
  const ResponseStack s = kirsch_filter(img);
  for (int y = 1; y < 11; ++y) {
    for (int x = 1; x < 11; ++x) {
      const auto r = directional_responses(s, {x, y}, 1, ResponseSource::PerDirectionPlane);
      for (int i = 0; i < 8; ++i) {
        ASSERT_EQ(r.values[i], oracle::correlate(img, oracle::kKirsch[i], x + oracle::kRing1[i].first,
                                                 y + oracle::kRing1[i].second));
      }
    }
  }
}

TEST(HoldpCode, TopThree) { EXPECT_EQ(prominent({8, 7, 6, 5, 4, 3, 2, 1}, 3), 0b00000111); }

TEST(HoldpCode, AllEqualSetsEveryBit) {
  for (int t = 1; t <= 8; ++t) EXPECT_EQ(prominent(Values{}, t), 255);
}

TEST(HoldpCode, ThresholdAtMinimum) {
  EXPECT_EQ(prominent({3, 1, 4, 1, 5, 9, 2, 6}, 8), 255);
  EXPECT_THROW(prominent(Values{}, 0), ArgumentError);
  EXPECT_THROW(prominent(Values{}, 9), ArgumentError);
}

TEST(HoldpCode, TiesAtThresholdSetExtraBits) {
  // Third largest is 5, shared by two entries: four bits set.
  EXPECT_EQ(prominent({9, 7, 5, 5, 1, 0, 0, 0}, 3), 0b00001111);
}

TEST(HoldpCode, AgreesWithRankCountingOracle) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> v(-4, 4);
  for (int trial = 0; trial < 5000; ++trial) {
    Values vals{};
    for (double& x : vals) x = v(rng);
    for (int t = 1; t <= 8; ++t) ASSERT_EQ(prominent(vals, t), oracle::prominent_code(vals, t));
    ASSERT_EQ(adaptive(vals), oracle::median_code(vals));
  }
}

TEST(AholdpCode, Examples) {
  const std::uint8_t code = adaptive({1, 2, 3, 4, 5, 6, 7, 8});
  EXPECT_EQ(code, 0b11110000);
  EXPECT_EQ(std::popcount(code), 4);
  EXPECT_EQ(adaptive(Values{}), 255);
  EXPECT_EQ(adaptive({0, 0, 0, 0, 10, 10, 10, 10}), 0b11110000);
  EXPECT_EQ(adaptive({10, 0, 10, 0, 10, 0, 10, 0}), 0b01010101);
}

TEST(LbpCode, Examples) {
  EXPECT_EQ(lbp_code(GrayImage(3, 3, 4.0), {1, 1}), 255);
  EXPECT_EQ(lbp_code(patch(100, {99, 99, 99, 99, 99, 99, 99, 99}), {1, 1}), 0);
  EXPECT_EQ(lbp_code(patch(5, {6, 4, 6, 4, 6, 4, 6, 4}), {1, 1}), 85);
  EXPECT_THROW(lbp_code(GrayImage(3, 3), {0, 1}), RangeError);
}

TEST(LtpCodes, Examples) {
  EXPECT_EQ(ltp_codes(GrayImage(3, 3, 4.0), {1, 1}, 0.5), (LtpCodes{0, 0}));
  const GrayImage p = patch(100, {103, 100, 97, 101, 99, 110, 90, 100});
  const LtpCodes c = ltp_codes(p, {1, 1}, 2.0);
  EXPECT_EQ(c.positive, (1 << 0) | (1 << 5));
  EXPECT_EQ(c.negative, (1 << 2) | (1 << 6));
  EXPECT_THROW(ltp_codes(p, {1, 1}, -1.0), ArgumentError);
}

TEST(LtpCodes, ZeroTauDegeneratesToLbp) {
  std::mt19937_64 rng(34);
  std::uniform_int_distribution<int> v(0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    GrayImage img(3, 3);
    for (double& x : img.pixels()) x = v(rng);
    const LtpCodes c = ltp_codes(img, {1, 1}, 0.0);
    const std::uint8_t lbp = lbp_code(img, {1, 1});
    ASSERT_EQ(c.positive, lbp);
    std::uint8_t below = 0;
    for (int p = 0; p < 8; ++p) {
      const auto [dx, dy] = oracle::kRing1[p];
      if (img.at(1 + dx, 1 + dy) < img.at(1, 1)) below |= 1u << p;
    }
    ASSERT_EQ(c.negative, below);
    ASSERT_EQ(static_cast<std::uint8_t>(~c.positive), c.negative);
  }
}

TEST(LdpCode, EqualsLayerOneHoldp) {
  std::mt19937_64 rng(35);
  const GrayImage img = oracle::random_image(rng, 10, 10);
  const ResponseStack s = kirsch_filter(img);
  for (int t = 1; t <= 7; ++t) {
    for (int y = 1; y < 9; ++y) {
      for (int x = 1; x < 9; ++x) {
        const auto r = directional_responses(s, {x, y}, 1, ResponseSource::PerDirectionPlane);
        ASSERT_EQ(ldp_code(s, {x, y}, t), holdp_code(r, t));
      }
    }
  }
  const ResponseStack flat = kirsch_filter(GrayImage(5, 5, 3.0));
  EXPECT_EQ(ldp_code(flat, {2, 2}, 3), 255);
}

TEST(LdpMap, MatchesBruteForceOracle) {
  std::mt19937_64 rng(36);
  const GrayImage img = oracle::random_image(rng, 64, 64);
  for (int t = 2; t <= 6; ++t) {
    const PatternMap map = ldp_map(img, t);
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) ASSERT_EQ(map.at(x, y), oracle::ldp(img, x, y, t));
    }
  }
}

TEST(EncodePatternMaps, ConstantImageIsAll255) {
  for (const auto mode : {ThresholdMode::Prominent, ThresholdMode::AdaptiveMedian}) {
    CodeConfig config{3, mode, 4, ResponseSource::PerDirectionPlane};
    const auto maps = encode_pattern_maps(GrayImage(12, 9, 77.0), config);
    ASSERT_EQ(maps.size(), 3u);
    for (const auto& m : maps) {
      EXPECT_EQ(m.width, 12);
      EXPECT_EQ(m.height, 9);
      for (const auto c : m.codes) ASSERT_EQ(c, 255);
    }
  }
}

TEST(EncodePatternMaps, OrderOneIsLdp) {
  std::mt19937_64 rng(37);
  const GrayImage img = oracle::random_image(rng, 20, 15);
  const ResponseStack s = kirsch_filter(pad(img, 1));
  for (int t = 1; t <= 7; ++t) {
    const auto maps = encode_pattern_maps(img, {1, ThresholdMode::Prominent, t});
    for (int y = 0; y < 15; ++y) {
      for (int x = 0; x < 20; ++x) ASSERT_EQ(maps[0].at(x, y), ldp_code(s, {x + 1, y + 1}, t));
    }
  }
}

TEST(EncodePatternMaps, MatchesRingMaterializingOracle) {
  std::mt19937_64 rng(38);
  const GrayImage img = oracle::random_image(rng, 9, 9);
  for (const auto source : {ResponseSource::PerDirectionPlane, ResponseSource::MaxPlane}) {
    const bool use_max = source == ResponseSource::MaxPlane;
    const auto adaptive_maps =
        encode_pattern_maps(img, {3, ThresholdMode::AdaptiveMedian, 3, source});
    const auto prominent_maps = encode_pattern_maps(img, {3, ThresholdMode::Prominent, 3, source});
    for (int layer = 1; layer <= 3; ++layer) {
      for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 9; ++x) {
          const auto m = oracle::responses(img, x, y, layer, use_max);
          ASSERT_EQ(adaptive_maps[layer - 1].at(x, y), oracle::median_code(m));
          ASSERT_EQ(prominent_maps[layer - 1].at(x, y), oracle::prominent_code(m, 3));
        }
      }
    }
  }
}

TEST(EncodePatternMaps, RejectsSmallImagesAndBadConfig) {
  EXPECT_THROW(encode_pattern_maps(GrayImage(4, 9), {2}), ArgumentError);
  EXPECT_NO_THROW(encode_pattern_maps(GrayImage(5, 5), {2}));
  EXPECT_THROW(encode_pattern_maps(GrayImage(9, 9), {0}), ArgumentError);
  EXPECT_THROW(encode_pattern_maps(GrayImage(9, 9), {1, ThresholdMode::Prominent, 8}),
               ArgumentError);
  EXPECT_NO_THROW(encode_pattern_maps(GrayImage(9, 9), {1, ThresholdMode::AdaptiveMedian, 8}));
}

TEST(EncodePatternMaps, AffineInvariance) {
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 6; ++trial) {
    const GrayImage img = oracle::random_image(rng, 24, 24);
    const auto [a, b] = oracle::random_affine(rng);
    const GrayImage lit = affine(img, a, b);
    for (const auto mode : {ThresholdMode::Prominent, ThresholdMode::AdaptiveMedian}) {
      for (const auto source : {ResponseSource::PerDirectionPlane, ResponseSource::MaxPlane}) {
        const CodeConfig config{3, mode, 2 + trial % 5, source};
        ASSERT_EQ(encode_pattern_maps(lit, config), encode_pattern_maps(img, config));
      }
    }
    ASSERT_EQ(lbp_map(lit), lbp_map(img));
    ASSERT_EQ(ltp_maps(lit, 3.0 * a), ltp_maps(img, 3.0));
  }
}

TEST(LtpMaps, UnscaledTauBreaksInvariance) {
  std::mt19937_64 rng(40);
  const GrayImage img = oracle::random_image(rng, 16, 16);
  EXPECT_NE(ltp_maps(affine(img, 4.0, 0.0), 5.0), ltp_maps(img, 5.0));
}

TEST(EncodePatternMaps, PopcountLaws) {
  // Continuous random values make response ties measure-zero; any tie that
  // does occur is skipped rather than asserted.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  GrayImage img(32, 32);
  for (double& v : img.pixels()) v = u(rng);
  const GrayImage padded = pad(img, 3);
  const ResponseStack s = kirsch_filter(padded);
  for (int layer = 1; layer <= 3; ++layer) {
    for (int y = 3; y < 35; ++y) {
      for (int x = 3; x < 35; ++x) {
        const auto r = directional_responses(s, {x, y}, layer, ResponseSource::PerDirectionPlane);
        std::set<double> distinct(r.values.begin(), r.values.end());
        if (distinct.size() != 8) continue;
        for (int t = 1; t <= 7; ++t) ASSERT_EQ(std::popcount(holdp_code(r, t)), t);
        ASSERT_EQ(std::popcount(aholdp_code(r)), 4);
      }
    }
  }
}

}  // namespace
}  // namespace holdp
