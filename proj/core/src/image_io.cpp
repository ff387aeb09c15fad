#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "holdp/errors.hpp"
#include "holdp/image.hpp"

namespace holdp {

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

class PgmReader {
 public:
  PgmReader(const std::vector<unsigned char>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  GrayImage read() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || (bytes_[1] != '2' && bytes_[1] != '5')) {
      throw FormatError(name_ + ": not a P2/P5 PGM");
    }
    const bool binary = bytes_[1] == '5';
    pos_ = 2;
    const long width = next_int();
    const long height = next_int();
    const long maxval = next_int();
    if (width < 1 || height < 1 || width > (1 << 20) || height > (1 << 20)) {
      throw FormatError(name_ + ": bad PGM dimensions");
    }
    if (maxval < 1 || maxval > 65535) throw FormatError(name_ + ": bad PGM maxval");

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> pixels(count);
    const double scale = maxval == 255 ? 1.0 : 255.0 / static_cast<double>(maxval);

    if (binary) {
      // Exactly one whitespace byte separates maxval from the raster.
      if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
        throw FormatError(name_ + ": malformed PGM header");
      }
      ++pos_;
      const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
      if (bytes_.size() - pos_ < count * sample_bytes) {
        throw FormatError(name_ + ": truncated PGM raster");
      }
      for (std::size_t i = 0; i < count; ++i) {
        long v = bytes_[pos_++];
        if (sample_bytes == 2) v = (v << 8) | bytes_[pos_++];
        if (v > maxval) throw FormatError(name_ + ": sample exceeds maxval");
        pixels[i] = static_cast<double>(v) * scale;
      }
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        const long v = next_int();
        if (v > maxval) throw FormatError(name_ + ": sample exceeds maxval");
        pixels[i] = static_cast<double>(v) * scale;
      }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError(name_ + ": expected a number in PGM data");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 100000000) throw FormatError(name_ + ": number too large in PGM");
    }
    return v;
  }

  const std::vector<unsigned char>& bytes_;
  const std::string& name_;
  std::size_t pos_ = 0;
};

struct PngSource {
  const std::vector<unsigned char>* bytes;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->bytes->size() - src->pos < length) png_error(png, "unexpected end of PNG data");
  std::copy_n(src->bytes->data() + src->pos, length, out);
  src->pos += length;
}

// All state is declared before setjmp so a libpng longjmp skips no destructors.
GrayImage read_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  PngSource source{&bytes, 8};
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::vector<unsigned char> raster;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int depth = 0;

  png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError(name + ": cannot initialize PNG decoder");
  info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw FormatError(name + ": cannot initialize PNG decoder");
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(name + ": corrupt PNG");
  }

  png_set_read_fn(png, &source, png_read_from_memory);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  channels = png_get_channels(png, info);
  depth = png_get_bit_depth(png, info);
  if (width < 1 || height < 1 || width > (1u << 20) || height > (1u << 20) ||
      (channels != 1 && channels != 3) || (depth != 8 && depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(name + ": unsupported PNG layout");
  }

  raster.resize(png_get_rowbytes(png, info) * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = raster.data() + static_cast<std::size_t>(y) * png_get_rowbytes(png, info);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> pixels(count);
  const std::size_t sample_bytes = depth == 16 ? 2 : 1;
  const double scale = depth == 16 ? 255.0 / 65535.0 : 1.0;
  auto sample = [&](std::size_t i) {
    const unsigned char* p = raster.data() + i * sample_bytes;
    const unsigned v = sample_bytes == 2 ? (unsigned{p[0]} << 8) | p[1] : p[0];
    return static_cast<double>(v) * scale;
  };
  for (std::size_t i = 0; i < count; ++i) {
    if (channels == 1) {
      pixels[i] = sample(i);
    } else {
      pixels[i] = luma(sample(3 * i), sample(3 * i + 1), sample(3 * i + 2));
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::string name = path.string();
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return read_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 'P') return PgmReader(bytes, name).read();
  throw FormatError(name + ": unsupported image format (expected PGM or PNG)");
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<char> raster(img.size());
  const auto pixels = img.pixels();
  for (std::size_t i = 0; i < raster.size(); ++i) {
    const double v = std::clamp(std::round(pixels[i]), 0.0, 255.0);
    raster[i] = static_cast<char>(static_cast<unsigned char>(v));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace holdp
