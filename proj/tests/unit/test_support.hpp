#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "chaoscrypt/chaoscrypt.hpp"

namespace testsupport {

inline std::string data_path(const std::string& name) { return std::string(CHAOSCRYPT_TEST_DATA) + "/" + name; }

inline chaoscrypt::Plane random_plane(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                      int max_value = 255) {
  std::uniform_int_distribution<int> d(0, max_value);
  chaoscrypt::Plane p(rows, cols);
  for (auto& v : p) v = static_cast<std::uint8_t>(d(rng));
  return p;
}

inline chaoscrypt::Image random_image(chaoscrypt::ImageKind kind, std::size_t rows, std::size_t cols,
                                      std::mt19937_64& rng) {
  const int top = kind == chaoscrypt::ImageKind::binary ? 1 : 255;
  std::vector<chaoscrypt::Plane> planes;
  for (std::size_t k = 0; k < chaoscrypt::channel_count(kind); ++k) planes.push_back(random_plane(rows, cols, rng, top));
  return chaoscrypt::Image(kind, std::move(planes));
}

// Smooth synthetic picture: gradients plus a disc, so neighbouring pixels correlate.
inline chaoscrypt::Image smooth_image(chaoscrypt::ImageKind kind, std::size_t rows, std::size_t cols) {
  chaoscrypt::Image img(kind, rows, cols);
  for (std::size_t k = 0; k < img.channels(); ++k)
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        const double di = static_cast<double>(i) - rows / 2.0, dj = static_cast<double>(j) - cols / 2.0;
        const bool disc = di * di + dj * dj < static_cast<double>(rows * cols) / 10.0;
        int v = static_cast<int>((i * 200) / rows + (j * 55) / cols + 20 * k) + (disc ? 40 : 0);
        if (kind == chaoscrypt::ImageKind::binary) v = disc ? 1 : 0;
        img.at(i, j, k) = static_cast<std::uint8_t>(std::min(v, 255));
      }
  return img;
}

// Fixed key set, independent of any image.
inline chaoscrypt::KeySpace fixed_keys() {
  chaoscrypt::KeySpace k;
  k.r1 = 1.2;
  k.r2 = 0.75;
  k.x0_1 = 0.41;
  k.y0_1 = 0.27;
  k.x0_2 = 0.63;
  k.y0_2 = 0.38;
  return k;
}

}  // namespace testsupport
