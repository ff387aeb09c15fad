#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace holdp {

/// Integer pixel coordinate; x grows to the right, y grows downward.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Row-major grayscale image with real-valued intensities (nominally 0..255).
///
/// Integer file formats are widened to double on load so that filter
/// responses of affinely transformed images stay exact.
class GrayImage {
 public:
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  double at(int x, int y) const { return pixels_[index(x, y)]; }
  double& at(int x, int y) { return pixels_[index(x, y)]; }

  /// Reads with coordinates clamped into the image (replicate border).
  double clamped(int x, int y) const;

  std::span<const double> pixels() const noexcept { return pixels_; }
  std::span<double> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<double> pixels_;
};

enum class Interpolation { Bilinear, Nearest };

struct ResizePolicy {
  int target_width = 64;
  int target_height = 64;
  Interpolation interpolation = Interpolation::Bilinear;
};

enum class PadMode { Replicate };

/// Resamples to the policy's target size using pixel-center alignment.
/// Same-size requests return an exact copy.
GrayImage resize(const GrayImage& img, const ResizePolicy& policy);

/// Grows the image by `margin` on every side, replicating the nearest edge pixel.
GrayImage pad(const GrayImage& img, int margin, PadMode mode = PadMode::Replicate);

/// Returns a*I + b, pixel by pixel.
GrayImage affine(const GrayImage& img, double gain, double offset);

/// Rotates the image content 90 degrees counterclockwise.
GrayImage rotate90(const GrayImage& img);

/// ITU-R BT.601 luma.
inline double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

/// Loads PGM (P2/P5, 8 or 16 bit) or PNG (gray, gray+alpha, RGB, RGBA, palette).
/// Color inputs are converted to luma; 16-bit samples are rescaled to 0..255.
/// Throws IoError when the file cannot be read and FormatError otherwise.
GrayImage load_image(const std::filesystem::path& path);

/// Writes 8-bit binary PGM (P5). Values are rounded and clamped to 0..255.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace holdp
