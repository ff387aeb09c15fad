#include "holdp/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "holdp/errors.hpp"

namespace holdp {

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw ArgumentError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                        std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, double fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ArgumentError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                        std::to_string(width) + "x" + std::to_string(height));
  }
}

double GrayImage::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

GrayImage resize(const GrayImage& img, const ResizePolicy& policy) {
  const int dw = policy.target_width;
  const int dh = policy.target_height;
  check_dimensions(dw, dh);
  if (dw == img.width() && dh == img.height()) return img;

  const int sw = img.width();
  const int sh = img.height();
  const double sx = static_cast<double>(sw) / dw;
  const double sy = static_cast<double>(sh) / dh;
  GrayImage out(dw, dh);

  if (policy.interpolation == Interpolation::Nearest) {
    for (int y = 0; y < dh; ++y) {
      const int yy = std::min(sh - 1, static_cast<int>(std::floor((y + 0.5) * sy)));
      for (int x = 0; x < dw; ++x) {
        const int xx = std::min(sw - 1, static_cast<int>(std::floor((x + 0.5) * sx)));
        out.at(x, y) = img.at(xx, yy);
      }
    }
    return out;
  }

  for (int y = 0; y < dh; ++y) {
    const double fy_src = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(sh - 1));
    const int y0 = static_cast<int>(std::floor(fy_src));
    const int y1 = std::min(y0 + 1, sh - 1);
    const double fy = fy_src - y0;
    for (int x = 0; x < dw; ++x) {
      const double fx_src = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(sw - 1));
      const int x0 = static_cast<int>(std::floor(fx_src));
      const int x1 = std::min(x0 + 1, sw - 1);
      const double fx = fx_src - x0;
      // Difference form keeps constant regions exactly constant.
      const double a = img.at(x0, y0);
      const double b = img.at(x1, y0);
      const double c = img.at(x0, y1);
      const double d = img.at(x1, y1);
      const double top = a + fx * (b - a);
      const double bottom = c + fx * (d - c);
      out.at(x, y) = top + fy * (bottom - top);
    }
  }
  return out;
}

GrayImage pad(const GrayImage& img, int margin, PadMode /*mode*/) {
  if (margin < 0) throw ArgumentError("pad margin must be non-negative");
  if (margin == 0) return img;
  GrayImage out(img.width() + 2 * margin, img.height() + 2 * margin);
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      out.at(x, y) = img.clamped(x - margin, y - margin);
    }
  }
  return out;
}

GrayImage affine(const GrayImage& img, double gain, double offset) {
  GrayImage out = img;
  for (double& v : out.pixels()) v = gain * v + offset;
  return out;
}

GrayImage rotate90(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out(h, w);
  // Source (x, y) moves to (y, w - 1 - x): East becomes North.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(y, w - 1 - x) = img.at(x, y);
  }
  return out;
}

}  // namespace holdp
