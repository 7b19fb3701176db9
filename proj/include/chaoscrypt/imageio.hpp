#pragma once

// Portable anymap (PBM/PGM/PPM, plain and raw) and 8-bit PNG codecs.
// Format is chosen by file extension. Binary images map to PBM and to 1-bit
// grayscale PNG; sample values are stored unchanged in both.

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chaoscrypt/error.hpp"
#include "chaoscrypt/image.hpp"
#include "chaoscrypt/io_util.hpp"

namespace chaoscrypt {

enum class ImageFormat { pbm, pgm, ppm, png };

inline ImageFormat format_from_path(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".pbm") return ImageFormat::pbm;
  if (ext == ".pgm") return ImageFormat::pgm;
  if (ext == ".ppm" || ext == ".pnm") return ImageFormat::ppm;
  if (ext == ".png") return ImageFormat::png;
  throw FormatError("unsupported image extension '" + ext + "' for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Anymap

namespace detail {

class PnmReader {
 public:
  explicit PnmReader(const std::vector<std::uint8_t>& bytes) : b_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number() {
    skip_space_and_comments();
    if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) throw FormatError("truncated anymap header");
    std::size_t v = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      v = v * 10 + (b_[pos_++] - '0');
      if (v > (1u << 30)) throw FormatError("anymap value too large");
    }
    return v;
  }

  // Plain PBM digits may be packed without separators.
  std::uint8_t bit() {
    skip_space_and_comments();
    if (pos_ >= b_.size()) throw FormatError("truncated plain PBM data");
    const auto c = b_[pos_++];
    if (c != '0' && c != '1') throw FormatError("invalid plain PBM digit");
    return static_cast<std::uint8_t>(c - '0');
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::size_t remaining() const noexcept { return pos_ < b_.size() ? b_.size() - pos_ : 0; }
  std::uint8_t at(std::size_t i) const { return b_[i]; }

 private:
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

inline Image decode_pnm(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] < '1' || bytes[1] > '6')
    throw FormatError("not a PBM/PGM/PPM file");
  const int type = bytes[1] - '0';
  PnmReader rd(bytes);
  rd.advance(2);
  const std::size_t cols = rd.number();
  const std::size_t rows = rd.number();
  if (rows == 0 || cols == 0) throw FormatError("anymap with zero area");
  const bool bitmap = type == 1 || type == 4;
  std::size_t maxval = 1;
  if (!bitmap) {
    maxval = rd.number();
    if (maxval == 0) throw FormatError("anymap maxval 0");
    if (maxval > 255) throw FormatError("unsupported anymap bit depth (maxval " +
                                        std::to_string(maxval) + ")");
  }
  const ImageKind kind =
      bitmap ? ImageKind::binary : (type == 3 || type == 6 ? ImageKind::color : ImageKind::gray);
  Image img(kind, rows, cols);
  const std::size_t ch = img.channels();

  const bool raw = type >= 4;
  if (raw) {
    // Exactly one whitespace byte separates the header from the raster.
    if (rd.remaining() == 0) throw FormatError("truncated anymap");
    rd.advance(1);
  }
  if (type == 1) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) img.at(i, j) = rd.bit();
  } else if (type == 4) {
    const std::size_t stride = (cols + 7) / 8;
    if (rd.remaining() < stride * rows) throw FormatError("truncated raw PBM data");
    const std::size_t base = rd.pos();
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        img.at(i, j) = (rd.at(base + i * stride + j / 8) >> (7 - j % 8)) & 1u;
  } else if (raw) {
    if (rd.remaining() < rows * cols * ch) throw FormatError("truncated raw anymap data");
    const std::size_t base = rd.pos();
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t c = 0; c < ch; ++c) {
          const auto v = rd.at(base + (i * cols + j) * ch + c);
          if (v > maxval) throw FormatError("anymap sample exceeds maxval");
          img.at(i, j, c) = v;
        }
  } else {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t c = 0; c < ch; ++c) {
          const std::size_t v = rd.number();
          if (v > maxval) throw FormatError("anymap sample exceeds maxval");
          img.at(i, j, c) = static_cast<std::uint8_t>(v);
        }
  }
  return img;
}

inline std::string encode_pnm(const Image& img, bool plain) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  std::string out;
  if (img.kind() == ImageKind::binary) {
    out = std::string(plain ? "P1" : "P4") + "\n" + std::to_string(cols) + " " +
          std::to_string(rows) + "\n";
    if (plain) {
      for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          out += static_cast<char>('0' + img.at(i, j));
          out += (j + 1 == cols) ? '\n' : ' ';
        }
      }
    } else {
      const std::size_t stride = (cols + 7) / 8;
      std::string raster(stride * rows, '\0');
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          if (img.at(i, j))
            raster[i * stride + j / 8] =
                static_cast<char>(raster[i * stride + j / 8] | (1 << (7 - j % 8)));
      out += raster;
    }
    return out;
  }
  const bool color = img.kind() == ImageKind::color;
  const char* magic = color ? (plain ? "P3" : "P6") : (plain ? "P2" : "P5");
  out = std::string(magic) + "\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  const std::size_t ch = img.channels();
  if (plain) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t c = 0; c < ch; ++c) {
          out += std::to_string(img.at(i, j, c));
          out += ' ';
        }
      out.back() = '\n';
    }
  } else {
    std::string raster(rows * cols * ch, '\0');
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t c = 0; c < ch; ++c)
          raster[(i * cols + j) * ch + c] = static_cast<char>(img.at(i, j, c));
    out += raster;
  }
  return out;
}

// ---------------------------------------------------------------------------
// PNG

struct PngMemoryReader {
  const std::vector<std::uint8_t>* bytes;
  std::size_t pos;
};

inline void png_read_cb(png_structp png, png_bytep out, png_size_t n) {
  auto* rd = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
  if (rd->pos + n > rd->bytes->size()) png_error(png, "truncated PNG data");
  std::memcpy(out, rd->bytes->data() + rd->pos, n);
  rd->pos += n;
}

inline void png_write_cb(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

inline void png_flush_cb(png_structp) {}

inline void png_error_cb(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  *err = msg;
  png_longjmp(png, 1);
}

inline void png_warning_cb(png_structp, png_const_charp) {}

inline Image decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw FormatError("not a PNG file");
  std::string err;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_cb, png_warning_cb);
  if (!png) throw FormatError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  PngMemoryReader rd{&bytes, 0};
  // Everything libpng-owned is released below; the image is only handed out
  // after a successful read.
  Image img;
  std::string fail;
  std::vector<std::uint8_t> raster;
  std::vector<png_bytep> rows_ptr;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("PNG decode failed: " + err);
  }
  png_set_read_fn(png, &rd, png_read_cb);
  png_read_info(png, info);
  const png_uint_32 cols = png_get_image_width(png, info);
  const png_uint_32 rows = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int ctype = png_get_color_type(png, info);

  ImageKind kind = ImageKind::gray;
  if (depth == 16) {
    fail = "unsupported PNG bit depth 16";
  } else if ((ctype & PNG_COLOR_MASK_ALPHA) || png_get_valid(png, info, PNG_INFO_tRNS)) {
    fail = "PNG images with alpha are not supported";
  } else if (ctype == PNG_COLOR_TYPE_GRAY) {
    if (depth == 1) {
      kind = ImageKind::binary;
      png_set_packing(png);
    } else if (depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
  } else if (ctype == PNG_COLOR_TYPE_PALETTE) {
    kind = ImageKind::color;
    png_set_palette_to_rgb(png);
  } else if (ctype == PNG_COLOR_TYPE_RGB) {
    kind = ImageKind::color;
  } else {
    fail = "unsupported PNG color type";
  }
  if (fail.empty()) {
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    const std::size_t ch = channel_count(kind);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    if (rowbytes != cols * ch) {
      fail = "unexpected PNG row layout";
    } else {
      raster.resize(rowbytes * rows);
      rows_ptr.resize(rows);
      for (png_uint_32 i = 0; i < rows; ++i) rows_ptr[i] = raster.data() + i * rowbytes;
      png_read_image(png, rows_ptr.data());
      png_read_end(png, nullptr);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (!fail.empty()) throw FormatError(fail);

  img = Image(kind, rows, cols);
  const std::size_t ch = img.channels();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t c = 0; c < ch; ++c) img.at(i, j, c) = raster[(i * cols + j) * ch + c];
  return img;
}

inline std::vector<png_bytep> png_row_pointers(std::vector<std::uint8_t>& raster, const Image& img) {
  const std::size_t rows = img.rows(), cols = img.cols(), ch = img.channels();
  raster.assign(rows * cols * ch, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t c = 0; c < ch; ++c) raster[(i * cols + j) * ch + c] = img.at(i, j, c);
  std::vector<png_bytep> ptrs(rows);
  for (std::size_t i = 0; i < rows; ++i) ptrs[i] = raster.data() + i * cols * ch;
  return ptrs;
}

inline std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> out;
  std::string err;
  std::vector<std::uint8_t> raster;
  std::vector<png_bytep> rows_ptr = png_row_pointers(raster, img);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_cb, png_warning_cb);
  if (!png) throw FormatError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("PNG encode failed: " + err);
  }
  png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
  const bool binary = img.kind() == ImageKind::binary;
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols()), static_cast<png_uint_32>(img.rows()),
               binary ? 1 : 8, img.kind() == ImageKind::color ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (binary) png_set_packing(png);
  png_write_image(png, rows_ptr.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace detail

inline Image decode_image(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return detail::decode_png(bytes);
  return detail::decode_pnm(bytes);
}

inline Image load_image(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_image(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

struct SaveOptions {
  /// Write the ASCII (P1/P2/P3) anymap variants instead of raw ones.
  bool plain = false;
};

inline std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat fmt,
                                              SaveOptions opts = {}) {
  switch (fmt) {
    case ImageFormat::png:
      return detail::encode_png(img);
    case ImageFormat::pbm:
      if (img.kind() != ImageKind::binary) throw FormatError("PBM holds binary images only");
      break;
    case ImageFormat::pgm:
      if (img.kind() != ImageKind::gray) throw FormatError("PGM holds grayscale images only");
      break;
    case ImageFormat::ppm:
      if (img.kind() != ImageKind::color) throw FormatError("PPM holds color images only");
      break;
  }
  const std::string s = detail::encode_pnm(img, opts.plain);
  return {s.begin(), s.end()};
}

inline void save_image(const Image& img, const std::string& path, SaveOptions opts = {}) {
  write_file_atomic(path, encode_image(img, format_from_path(path), opts));
}

/// Extension matching the image kind, for callers that pick output names.
inline std::string_view default_extension(ImageKind k) {
  switch (k) {
    case ImageKind::binary: return ".pbm";
    case ImageKind::gray: return ".pgm";
    case ImageKind::color: return ".ppm";
  }
  return ".ppm";
}

}  // namespace chaoscrypt
