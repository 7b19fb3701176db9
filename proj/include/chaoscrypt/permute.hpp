#pragma once

// Position-scrambling primitives. Every operation is a bijection on element
// positions and has an exact inverse selected by Direction::inverse.
//
// Scan paths (rows grow downwards, 1-based (row, col)):
//
//   clockwise spiral, 3x4            column-first spiral (shift I), 3x4
//     1 -> 2 -> 3 -> 4                  1    10 <- 9    8
//                    |                  |    |          ^
//    10 -> 11 -> 12  5                  2    11 -> 12   7
//     ^              |                  |               ^
//     9 <- 8 <- 7 <- 6                  3 -> 4 -> 5 ->  6
//
//   row-first spiral from the end (shift II), 3x4
//     6 -> 7 -> 8 -> 9
//     ^              |
//     5   12 <- 11  10
//     ^
//     4 <- 3 <- 2 <- 1
//
// Three-matrix ring (L, C, R): clockwise spiral of L, then the clockwise
// spiral of C walked backwards (it enters C at the cell where L's spiral
// ends and leaves at C(1,1)), then the clockwise spiral of R, closing at
// L(1,1). Color spiral shift I chains r -> g -> b with column-first spirals;
// shift II chains r -> b -> g with row-first spirals from the end.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaoscrypt/chaos.hpp"
#include "chaoscrypt/error.hpp"
#include "chaoscrypt/matrix.hpp"

namespace chaoscrypt {

enum class Direction { forward, inverse };

inline Direction opposite(Direction d) noexcept {
  return d == Direction::forward ? Direction::inverse : Direction::forward;
}

// ---------------------------------------------------------------------------
// Parity interleave

namespace detail {

// Odd (1-based) columns to the left half, even ones to the right half.
template <class T>
Matrix<T> interleave_cols(const Matrix<T>& in, Direction dir) {
  const std::size_t cols = in.cols();
  const std::size_t half = cols / 2;
  Matrix<T> out(in.rows(), cols);
  for (std::size_t i = 0; i < in.rows(); ++i)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t src = c < half ? 2 * c : 2 * (c - half) + 1;
      if (dir == Direction::forward)
        out(i, c) = in(i, src);
      else
        out(i, src) = in(i, c);
    }
  return out;
}

template <class T>
Matrix<T> interleave_rows(const Matrix<T>& in, Direction dir) {
  const std::size_t rows = in.rows();
  const std::size_t half = rows / 2;
  Matrix<T> out(rows, in.cols());
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t src = r < half ? 2 * r : 2 * (r - half) + 1;
    const auto from = dir == Direction::forward ? in.row(src) : in.row(r);
    auto to = dir == Direction::forward ? out.row(r) : out.row(src);
    std::copy(from.begin(), from.end(), to.begin());
  }
  return out;
}

}  // namespace detail

/// Moves odd columns left and even columns right, then odd rows up and even
/// rows down; repeated `times` times.
template <class T>
Matrix<T> parity_interleave(Matrix<T> plane, int times, Direction dir) {
  if (plane.rows() % 2 != 0 || plane.cols() % 2 != 0)
    throw DimensionError("parity interleave needs even dimensions, got " +
                         std::to_string(plane.rows()) + "x" + std::to_string(plane.cols()));
  for (int t = 0; t < times; ++t) {
    if (dir == Direction::forward)
      plane = detail::interleave_rows(detail::interleave_cols(plane, dir), dir);
    else
      plane = detail::interleave_cols(detail::interleave_rows(plane, dir), dir);
  }
  return plane;
}

// ---------------------------------------------------------------------------
// Block matrices

template <class T>
using BlockMatrix = Matrix<Matrix<T>>;

/// Cuts a plane into a block_rows x block_cols grid of equal tiles.
template <class T>
BlockMatrix<T> to_blocks(const Matrix<T>& plane, std::size_t block_rows, std::size_t block_cols) {
  if (block_rows == 0 || block_cols == 0 || plane.rows() % block_rows != 0 ||
      plane.cols() % block_cols != 0)
    throw DimensionError("plane " + std::to_string(plane.rows()) + "x" +
                         std::to_string(plane.cols()) + " does not tile into " +
                         std::to_string(block_rows) + "x" + std::to_string(block_cols) + " blocks");
  const std::size_t th = plane.rows() / block_rows;
  const std::size_t tw = plane.cols() / block_cols;
  BlockMatrix<T> bm(block_rows, block_cols);
  for (std::size_t bi = 0; bi < block_rows; ++bi)
    for (std::size_t bj = 0; bj < block_cols; ++bj) {
      Matrix<T> tile(th, tw);
      for (std::size_t i = 0; i < th; ++i)
        for (std::size_t j = 0; j < tw; ++j) tile(i, j) = plane(bi * th + i, bj * tw + j);
      bm(bi, bj) = std::move(tile);
    }
  return bm;
}

template <class T>
Matrix<T> from_blocks(const BlockMatrix<T>& bm) {
  if (bm.empty()) throw DimensionError("empty block matrix");
  const std::size_t th = bm(0, 0).rows();
  const std::size_t tw = bm(0, 0).cols();
  for (const auto& t : bm)
    if (t.rows() != th || t.cols() != tw) throw DimensionError("block tiles differ in size");
  Matrix<T> plane(bm.rows() * th, bm.cols() * tw);
  for (std::size_t bi = 0; bi < bm.rows(); ++bi)
    for (std::size_t bj = 0; bj < bm.cols(); ++bj)
      for (std::size_t i = 0; i < th; ++i)
        for (std::size_t j = 0; j < tw; ++j) plane(bi * th + i, bj * tw + j) = bm(bi, bj)(i, j);
  return plane;
}

/// Interleaves the block columns of r and b into rows 1-4 of a 6x8 block
/// matrix and lays g's rows pairwise along rows 5-6.
template <class T>
BlockMatrix<T> block_mix(const BlockMatrix<T>& r, const BlockMatrix<T>& g,
                         const BlockMatrix<T>& b) {
  for (const auto* p : {&r, &g, &b})
    if (p->rows() != 4 || p->cols() != 4) throw DimensionError("block_mix needs 4x4 block matrices");
  const auto& tile = r(0, 0);
  for (const auto* p : {&r, &g, &b})
    for (const auto& t : *p)
      if (!t.same_shape(tile)) throw DimensionError("block_mix tiles differ in size");
  BlockMatrix<T> mixed(6, 8);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) {
      mixed(i, 2 * j) = r(i, j);
      mixed(i, 2 * j + 1) = b(i, j);
    }
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t c = 0; c < 4; ++c) {
      mixed(4 + j, c) = g(2 * j, c);
      mixed(4 + j, 4 + c) = g(2 * j + 1, c);
    }
  return mixed;
}

template <class T>
std::array<BlockMatrix<T>, 3> block_unmix(const BlockMatrix<T>& mixed) {
  if (mixed.rows() != 6 || mixed.cols() != 8) throw DimensionError("block_unmix needs 6x8 blocks");
  std::array<BlockMatrix<T>, 3> out{BlockMatrix<T>(4, 4), BlockMatrix<T>(4, 4),
                                    BlockMatrix<T>(4, 4)};
  auto& [r, g, b] = out;
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 4; ++i) {
      r(i, j) = mixed(i, 2 * j);
      b(i, j) = mixed(i, 2 * j + 1);
    }
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t c = 0; c < 4; ++c) {
      g(2 * j, c) = mixed(4 + j, c);
      g(2 * j + 1, c) = mixed(4 + j, 4 + c);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Parity shifts: odd columns up / even down, then odd rows right / even left.

namespace detail {

inline std::size_t wrap_amount(std::int64_t amount, std::size_t len) {
  const auto l = static_cast<std::int64_t>(len);
  return static_cast<std::size_t>(((amount % l) + l) % l);
}

template <class T>
void shift_columns(Matrix<T>& m, std::span<const std::int64_t> amounts, Direction dir) {
  const std::size_t rows = m.rows();
  std::vector<T> col(rows);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::size_t k = wrap_amount(amounts[j], rows);
    const bool up = (j % 2 == 0) == (dir == Direction::forward);
    if (!up) k = (rows - k) % rows;
    if (k == 0) continue;
    // up by k: new(i) = old(i + k)
    for (std::size_t i = 0; i < rows; ++i) col[i] = std::move(m((i + k) % rows, j));
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = std::move(col[i]);
  }
}

template <class T>
void shift_rows(Matrix<T>& m, std::span<const std::int64_t> amounts, Direction dir) {
  const std::size_t cols = m.cols();
  std::vector<T> row(cols);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t k = wrap_amount(amounts[i], cols);
    const bool right = (i % 2 == 0) == (dir == Direction::forward);
    if (!right) k = (cols - k) % cols;
    if (k == 0) continue;
    // right by k: new(j) = old(j - k)
    for (std::size_t j = 0; j < cols; ++j) row[j] = std::move(m(i, (j + cols - k) % cols));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = std::move(row[j]);
  }
}

}  // namespace detail

/// Column j moves by col_amounts[j], then row i by row_amounts[i].
template <class T>
Matrix<T> parity_shift(Matrix<T> m, std::span<const std::int64_t> col_amounts,
                       std::span<const std::int64_t> row_amounts, Direction dir) {
  if (col_amounts.size() < m.cols() || row_amounts.size() < m.rows())
    throw DimensionError("parity shift has fewer amounts than rows/columns");
  if (dir == Direction::forward) {
    detail::shift_columns(m, col_amounts, dir);
    detail::shift_rows(m, row_amounts, dir);
  } else {
    detail::shift_rows(m, row_amounts, dir);
    detail::shift_columns(m, col_amounts, dir);
  }
  return m;
}

/// Parity shift with amounts from the one-digit truncated chaos stream; block
/// column j uses row 1 digit j, block row i uses row 2 digit i.
template <class T, class Map>
BlockMatrix<T> chaotic_block_shift(BlockMatrix<T> bm, const ChaosSeed& seed, const Map& map,
                                   Direction dir) {
  const std::size_t n = std::max(bm.rows(), bm.cols());
  const DigitMatrix d = truncated_sequence(map, seed.x0, seed.y0, seed.r, n, 1, 1);
  return parity_shift(std::move(bm), std::span<const std::int64_t>(d.x),
                      std::span<const std::int64_t>(d.y), dir);
}

/// Parity shift of raw matrix rows/columns by `digits`-digit chaos amounts.
template <class T, class Map>
Matrix<T> rowcol_chaotic_shift(Matrix<T> m, const ChaosSeed& seed, const Map& map, int digits,
                               Direction dir) {
  const std::size_t n = std::max(m.rows(), m.cols());
  const DigitMatrix d = truncated_sequence(map, seed.x0, seed.y0, seed.r, n, digits, digits);
  return parity_shift(std::move(m), std::span<const std::int64_t>(d.x),
                      std::span<const std::int64_t>(d.y), dir);
}

// ---------------------------------------------------------------------------
// Scan paths and rotation along them

struct PathCell {
  std::uint32_t plane = 0;
  std::uint32_t index = 0;  // row * cols + col

  friend bool operator==(const PathCell&, const PathCell&) = default;
};

using Path = std::vector<PathCell>;

enum class SpiralStart {
  clockwise,         // from (1,1) heading right
  column_first,      // from (1,1) heading down
  row_first_from_end // from (n,m) heading left
};

/// Linear indices of an inward rectangular spiral.
inline std::vector<std::uint32_t> spiral_order(std::size_t rows, std::size_t cols, SpiralStart start) {
  std::vector<std::uint32_t> order;
  if (rows == 0 || cols == 0) return order;
  order.reserve(rows * cols);
  std::array<std::pair<int, int>, 4> dirs{};
  long r = 0, c = 0;
  switch (start) {
    case SpiralStart::clockwise:
      dirs = {{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};
      break;
    case SpiralStart::column_first:
      dirs = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
      break;
    case SpiralStart::row_first_from_end:
      dirs = {{{0, -1}, {-1, 0}, {0, 1}, {1, 0}}};
      r = static_cast<long>(rows) - 1;
      c = static_cast<long>(cols) - 1;
      break;
  }
  std::vector<std::uint8_t> seen(rows * cols, 0);
  std::size_t d = 0;
  const auto free_cell = [&](long rr, long cc) {
    return rr >= 0 && cc >= 0 && rr < static_cast<long>(rows) && cc < static_cast<long>(cols) &&
           !seen[static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc)];
  };
  for (std::size_t k = 0; k < rows * cols; ++k) {
    const std::size_t idx = static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c);
    seen[idx] = 1;
    order.push_back(static_cast<std::uint32_t>(idx));
    if (k + 1 == rows * cols) break;
    for (int turn = 0; turn < 4; ++turn) {
      const auto [dr, dc] = dirs[d];
      if (free_cell(r + dr, c + dc)) {
        r += dr;
        c += dc;
        break;
      }
      d = (d + 1) % 4;
    }
  }
  return order;
}

inline void append_path(Path& path, std::uint32_t plane, const std::vector<std::uint32_t>& order,
                        bool reversed = false) {
  if (reversed)
    for (auto it = order.rbegin(); it != order.rend(); ++it) path.push_back({plane, *it});
  else
    for (auto idx : order) path.push_back({plane, idx});
}

inline Path lcr_ring_path(std::size_t rows, std::size_t cols) {
  const auto order = spiral_order(rows, cols, SpiralStart::clockwise);
  Path p;
  p.reserve(3 * order.size());
  append_path(p, 0, order);
  append_path(p, 1, order, true);
  append_path(p, 2, order);
  return p;
}

inline Path spiral_path(std::size_t planes, std::size_t rows, std::size_t cols, bool kind_two) {
  const auto order = spiral_order(rows, cols,
                                  kind_two ? SpiralStart::row_first_from_end : SpiralStart::column_first);
  Path p;
  p.reserve(planes * order.size());
  if (planes == 1) {
    append_path(p, 0, order);
  } else {
    const std::array<std::uint32_t, 3> seq = kind_two ? std::array<std::uint32_t, 3>{0, 2, 1}
                                                      : std::array<std::uint32_t, 3>{0, 1, 2};
    for (auto pl : seq) append_path(p, pl, order);
  }
  return p;
}

/// Moves the value at path position p to position p + amount (cyclically).
template <class T>
void rotate_along(std::span<Matrix<T>*> planes, const Path& path, std::uint64_t amount,
                  Direction dir) {
  const std::size_t len = path.size();
  if (len == 0) return;
  std::size_t k = static_cast<std::size_t>(amount % len);
  if (dir == Direction::inverse) k = (len - k) % len;
  if (k == 0) return;
  std::vector<T> vals(len);
  for (std::size_t p = 0; p < len; ++p) vals[p] = (*planes[path[p].plane])[path[p].index];
  for (std::size_t p = 0; p < len; ++p) {
    const auto& dst = path[(p + k) % len];
    (*planes[dst.plane])[dst.index] = std::move(vals[p]);
  }
}

template <class T>
std::array<Matrix<T>, 3> ring_shift_lcr(std::array<Matrix<T>, 3> lcr, std::uint64_t amount,
                                        Direction dir) {
  require_same_shape(lcr[0], lcr[1], "ring_shift_lcr");
  require_same_shape(lcr[0], lcr[2], "ring_shift_lcr");
  std::array<Matrix<T>*, 3> ptrs{&lcr[0], &lcr[1], &lcr[2]};
  rotate_along<T>(ptrs, lcr_ring_path(lcr[0].rows(), lcr[0].cols()), amount, dir);
  return lcr;
}

template <class T>
Matrix<T> ring_shift_gray(Matrix<T> plane, std::uint64_t amount, Direction dir) {
  Path p;
  append_path(p, 0, spiral_order(plane.rows(), plane.cols(), SpiralStart::clockwise));
  std::array<Matrix<T>*, 1> ptrs{&plane};
  rotate_along<T>(ptrs, p, amount, dir);
  return plane;
}

enum class SpiralKind { one, two };

/// Spiral shift over one plane or three chained planes.
template <class T>
std::vector<Matrix<T>> spiral_shift(std::vector<Matrix<T>> planes, SpiralKind kind,
                                    std::uint64_t amount, Direction dir) {
  if (planes.size() != 1 && planes.size() != 3)
    throw DimensionError("spiral shift takes one or three planes");
  for (const auto& p : planes) require_same_shape(p, planes[0], "spiral_shift");
  std::vector<Matrix<T>*> ptrs;
  for (auto& p : planes) ptrs.push_back(&p);
  rotate_along<T>(ptrs, spiral_path(planes.size(), planes[0].rows(), planes[0].cols(),
                                    kind == SpiralKind::two),
                  amount, dir);
  return planes;
}

}  // namespace chaoscrypt
