#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "holdp/image.hpp"

namespace holdp {

inline constexpr int kDirections = 8;

/// One 3x3 Kirsch compass kernel. Direction i points at angle i*45 degrees,
/// i = 0 is East, counting counterclockwise. coefficients[row][col], rows top to bottom.
struct KirschMask {
  int direction = 0;
  std::array<std::array<int, 3>, 3> coefficients{};

  int sum() const;
};

/// The canonical eight masks, direction 0..7.
const std::array<KirschMask, kDirections>& kirsch_masks();

/// Eight signed edge-response planes, one per compass direction.
class ResponseStack {
 public:
  ResponseStack(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  double at(int direction, int x, int y) const {
    return planes_[static_cast<std::size_t>(direction)][index(x, y)];
  }
  double& at(int direction, int x, int y) {
    return planes_[static_cast<std::size_t>(direction)][index(x, y)];
  }

  std::span<const double> plane(int direction) const {
    return planes_[static_cast<std::size_t>(direction)];
  }
  std::span<double> plane(int direction) { return planes_[static_cast<std::size_t>(direction)]; }

  /// Pointwise maximum over the eight planes.
  std::vector<double> max_plane() const;

  friend bool operator==(const ResponseStack&, const ResponseStack&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::array<std::vector<double>, kDirections> planes_;
};

/// Correlates the image with all eight masks. Borders use replicate padding,
/// so the stack has the same size as the input. No clipping or normalization.
ResponseStack kirsch_filter(const GrayImage& img);

}  // namespace holdp
