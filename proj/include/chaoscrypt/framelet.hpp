#pragma once

// Single-level undecimated 2D framelet transform from the piecewise-linear
// B-spline tight frame:
//   h0 = 1/4 [1, 2, 1],  h1 = sqrt(2)/4 [1, 0, -1],  h2 = 1/4 [-1, 2, -1].
// Boundaries are periodic. Since |H0|^2 + |H1|^2 + |H2|^2 = 1 the synthesis
// (adjoint) operator inverts the analysis exactly.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

#include "chaoscrypt/error.hpp"
#include "chaoscrypt/matrix.hpp"

namespace chaoscrypt {

using FrameletMask = std::array<double, 3>;

inline constexpr std::array<FrameletMask, 3> kFrameletMasks{{
    {0.25, 0.5, 0.25},
    {std::numbers::sqrt2 / 4.0, 0.0, -std::numbers::sqrt2 / 4.0},
    {-0.25, 0.5, -0.25},
}};

struct FrameletCoeffs {
  /// bands[a][b]: mask a along columns (vertical), mask b along rows.
  std::array<std::array<RealPlane, 3>, 3> bands;

  std::size_t rows() const noexcept { return bands[0][0].rows(); }
  std::size_t cols() const noexcept { return bands[0][0].cols(); }
};

namespace detail {

enum class Axis { horizontal, vertical };

// Correlation (adjoint = false) or its adjoint, convolution, along one axis.
inline RealPlane filter_axis(const RealPlane& in, const FrameletMask& h, Axis axis, bool adjoint) {
  const std::size_t rows = in.rows();
  const std::size_t cols = in.cols();
  RealPlane out(rows, cols);
  const double a = adjoint ? h[2] : h[0];  // weight of the preceding sample
  const double b = h[1];
  const double c = adjoint ? h[0] : h[2];  // weight of the following sample
  if (axis == Axis::horizontal) {
    for (std::size_t i = 0; i < rows; ++i) {
      const auto src = in.row(i);
      auto dst = out.row(i);
      for (std::size_t j = 0; j < cols; ++j) {
        const std::size_t jm = j == 0 ? cols - 1 : j - 1;
        const std::size_t jp = j + 1 == cols ? 0 : j + 1;
        dst[j] = a * src[jm] + b * src[j] + c * src[jp];
      }
    }
  } else {
    for (std::size_t i = 0; i < rows; ++i) {
      const auto prev = in.row(i == 0 ? rows - 1 : i - 1);
      const auto cur = in.row(i);
      const auto next = in.row(i + 1 == rows ? 0 : i + 1);
      auto dst = out.row(i);
      for (std::size_t j = 0; j < cols; ++j) dst[j] = a * prev[j] + b * cur[j] + c * next[j];
    }
  }
  return out;
}

inline void add_into(RealPlane& acc, const RealPlane& v) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
}

}  // namespace detail

inline FrameletCoeffs framelet_forward(const RealPlane& plane) {
  if (plane.rows() < 3 || plane.cols() < 3)
    throw DimensionError("framelet transform needs at least 3x3, got " +
                         std::to_string(plane.rows()) + "x" + std::to_string(plane.cols()));
  FrameletCoeffs c;
  for (std::size_t b = 0; b < 3; ++b) {
    const RealPlane horiz =
        detail::filter_axis(plane, kFrameletMasks[b], detail::Axis::horizontal, false);
    for (std::size_t a = 0; a < 3; ++a)
      c.bands[a][b] = detail::filter_axis(horiz, kFrameletMasks[a], detail::Axis::vertical, false);
  }
  return c;
}

inline FrameletCoeffs framelet_forward(const Plane& plane) {
  return framelet_forward(matrix_cast<double>(plane));
}

inline RealPlane framelet_inverse(const FrameletCoeffs& c) {
  const RealPlane& ll = c.bands[0][0];
  for (const auto& row : c.bands)
    for (const auto& band : row) require_same_shape(band, ll, "framelet_inverse");
  if (ll.rows() < 3 || ll.cols() < 3) throw DimensionError("framelet bands smaller than 3x3");

  RealPlane out(ll.rows(), ll.cols(), 0.0);
  for (std::size_t a = 0; a < 3; ++a) {
    RealPlane acc(ll.rows(), ll.cols(), 0.0);
    for (std::size_t b = 0; b < 3; ++b)
      detail::add_into(acc, detail::filter_axis(c.bands[a][b], kFrameletMasks[b],
                                                detail::Axis::horizontal, true));
    detail::add_into(out,
                     detail::filter_axis(acc, kFrameletMasks[a], detail::Axis::vertical, true));
  }
  return out;
}

inline const RealPlane& get_ll(const FrameletCoeffs& c) { return c.bands[0][0]; }

inline FrameletCoeffs set_ll(FrameletCoeffs c, RealPlane ll) {
  require_same_shape(ll, c.bands[0][0], "set_ll");
  c.bands[0][0] = std::move(ll);
  return c;
}

/// LL band alone, without computing the other eight.
inline RealPlane lowpass_ll(const RealPlane& plane) {
  const RealPlane h =
      detail::filter_axis(plane, kFrameletMasks[0], detail::Axis::horizontal, false);
  return detail::filter_axis(h, kFrameletMasks[0], detail::Axis::vertical, false);
}

/// Rounds half away from zero and clamps to [0, 255].
inline Plane quantize_to_bytes(const RealPlane& p) {
  Plane out(p.rows(), p.cols());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double v = std::round(p[k]);
    out[k] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
  }
  return out;
}

}  // namespace chaoscrypt
