#include "holdp/kirsch.hpp"

#include <algorithm>
#include <numeric>

#include "holdp/patterns.hpp"

namespace holdp {

int KirschMask::sum() const {
  int total = 0;
  for (const auto& row : coefficients) total = std::accumulate(row.begin(), row.end(), total);
  return total;
}

namespace {

// Mask i weights the three border cells centred on ring index i with 5 and
// the remaining five with -3; the centre is 0.
std::array<KirschMask, kDirections> build_masks() {
  const RingLayout ring = ring_positions(1);
  std::array<KirschMask, kDirections> masks{};
  for (int i = 0; i < kDirections; ++i) {
    KirschMask& mask = masks[static_cast<std::size_t>(i)];
    mask.direction = i;
    for (int g = 0; g < kDirections; ++g) {
      const int dist = std::min((g - i + kDirections) % kDirections,
                                (i - g + kDirections) % kDirections);
      const Offset o = ring.offsets[static_cast<std::size_t>(g)];
      mask.coefficients[static_cast<std::size_t>(o.dy + 1)][static_cast<std::size_t>(o.dx + 1)] =
          dist <= 1 ? 5 : -3;
    }
  }
  return masks;
}

}  // namespace

const std::array<KirschMask, kDirections>& kirsch_masks() {
  static const std::array<KirschMask, kDirections> masks = build_masks();
  return masks;
}

ResponseStack::ResponseStack(int width, int height) : width_(width), height_(height) {
  for (auto& p : planes_) {
    p.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0.0);
  }
}

std::vector<double> ResponseStack::max_plane() const {
  std::vector<double> out = planes_[0];
  for (int d = 1; d < kDirections; ++d) {
    const auto& p = planes_[static_cast<std::size_t>(d)];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::max(out[k], p[k]);
  }
  return out;
}

ResponseStack kirsch_filter(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  const GrayImage padded = pad(img, 1);
  const RingLayout ring = ring_positions(1);
  ResponseStack stack(w, h);

  // 5*arc - 3*(total - arc) == 8*arc - 3*total, with arc the three cells
  // around direction i and total the sum of all eight neighbours.
  std::array<double, kDirections> n{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double total = 0.0;
      for (int g = 0; g < kDirections; ++g) {
        const Offset o = ring.offsets[static_cast<std::size_t>(g)];
        n[static_cast<std::size_t>(g)] = padded.at(x + 1 + o.dx, y + 1 + o.dy);
        total += n[static_cast<std::size_t>(g)];
      }
      for (int i = 0; i < kDirections; ++i) {
        const double arc = n[static_cast<std::size_t>((i + 7) % 8)] +
                           n[static_cast<std::size_t>(i)] +
                           n[static_cast<std::size_t>((i + 1) % 8)];
        stack.at(i, x, y) = 8.0 * arc - 3.0 * total;
      }
    }
  }
  return stack;
}

}  // namespace holdp
