#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chaoscrypt/error.hpp"
#include "chaoscrypt/matrix.hpp"

namespace chaoscrypt {

enum class ImageKind { binary, gray, color };

inline std::string_view to_string(ImageKind k) {
  switch (k) {
    case ImageKind::binary: return "binary";
    case ImageKind::gray: return "gray";
    case ImageKind::color: return "color";
  }
  return "?";
}

inline ImageKind parse_image_kind(std::string_view s) {
  if (s == "binary") return ImageKind::binary;
  if (s == "gray") return ImageKind::gray;
  if (s == "color") return ImageKind::color;
  throw FormatError("unknown image kind '" + std::string(s) + "'");
}

inline std::size_t channel_count(ImageKind k) noexcept { return k == ImageKind::color ? 3 : 1; }

/// Planar 8-bit image. Binary images hold samples in {0, 1}.
class Image {
 public:
  Image() = default;

  Image(ImageKind kind, std::size_t rows, std::size_t cols)
      : kind_(kind), planes_(channel_count(kind), Plane(rows, cols, 0)) {}

  Image(ImageKind kind, std::vector<Plane> planes) : kind_(kind), planes_(std::move(planes)) {
    if (planes_.size() != channel_count(kind_))
      throw DimensionError(std::string(to_string(kind_)) + " image needs " +
                           std::to_string(channel_count(kind_)) + " planes, got " +
                           std::to_string(planes_.size()));
    for (const auto& p : planes_) require_same_shape(p, planes_[0], "image planes");
    if (kind_ == ImageKind::binary)
      for (auto v : planes_[0])
        if (v > 1) throw FormatError("binary image sample outside {0, 1}");
  }

  ImageKind kind() const noexcept { return kind_; }
  std::size_t rows() const noexcept { return planes_.empty() ? 0 : planes_[0].rows(); }
  std::size_t cols() const noexcept { return planes_.empty() ? 0 : planes_[0].cols(); }
  std::size_t channels() const noexcept { return planes_.size(); }
  std::size_t sample_count() const noexcept { return rows() * cols() * channels(); }

  Plane& plane(std::size_t c) { return planes_.at(c); }
  const Plane& plane(std::size_t c) const { return planes_.at(c); }
  std::vector<Plane>& planes() noexcept { return planes_; }
  const std::vector<Plane>& planes() const noexcept { return planes_; }

  std::uint8_t& at(std::size_t r, std::size_t c, std::size_t ch = 0) { return planes_[ch](r, c); }
  std::uint8_t at(std::size_t r, std::size_t c, std::size_t ch = 0) const {
    return planes_[ch](r, c);
  }

  bool same_shape(const Image& o) const noexcept {
    return kind_ == o.kind_ && rows() == o.rows() && cols() == o.cols();
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  ImageKind kind_ = ImageKind::gray;
  std::vector<Plane> planes_;
};

inline std::vector<Plane> split_planes(const Image& img) {
  if (img.kind() != ImageKind::color) throw DimensionError("split_planes needs a color image");
  return img.planes();
}

inline Image merge_planes(std::vector<Plane> planes) {
  if (planes.size() != 3) throw DimensionError("merge_planes needs exactly three planes");
  return Image(ImageKind::color, std::move(planes));
}

/// Grows a plane to rows x cols by repeating its last row and last column.
template <class T>
Matrix<T> pad_replicate(const Matrix<T>& p, std::size_t rows, std::size_t cols) {
  if (rows < p.rows() || cols < p.cols() || p.empty())
    throw DimensionError("pad_replicate cannot shrink or pad an empty plane");
  Matrix<T> out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t si = i < p.rows() ? i : p.rows() - 1;
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = p(si, j < p.cols() ? j : p.cols() - 1);
  }
  return out;
}

template <class T>
Matrix<T> crop(const Matrix<T>& p, std::size_t rows, std::size_t cols) {
  if (rows > p.rows() || cols > p.cols()) throw DimensionError("crop larger than plane");
  Matrix<T> out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = p(i, j);
  return out;
}

}  // namespace chaoscrypt
