#pragma once

// Image cipher: position scrambling keyed by (x0_1, y0_1, r1), a reversible
// automaton diffusion round keyed by (x0_2, y0_2, r2), then a keystream XOR
// seeded by the averaged keys.
//
// Color:  pad -> parity interleave x2 -> 4x4 blocks -> mix into 6x8 blocks
//         -> chaotic block shift -> split L/C/R -> ring shift -> automaton
//         round -> XOR (L with Qr, C with Qg, R with Qb)
// Gray:   pad -> parity interleave x2 -> ring shift -> automaton round -> XOR Qr
// Binary: as gray, over one bit per pixel, XOR with the top bit of Qr

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "chaoscrypt/automata.hpp"
#include "chaoscrypt/chaos.hpp"
#include "chaoscrypt/error.hpp"
#include "chaoscrypt/hybrid_config.hpp"
#include "chaoscrypt/image.hpp"
#include "chaoscrypt/keygen.hpp"
#include "chaoscrypt/permute.hpp"

namespace chaoscrypt {

inline constexpr std::uint8_t kCipherVersion = 1;
inline constexpr std::size_t kMaxSide = 1u << 15;

struct CipherHeader {
  std::uint8_t version = kCipherVersion;
  ImageKind kind = ImageKind::color;
  std::uint32_t orig_rows = 0;
  std::uint32_t orig_cols = 0;
  std::uint32_t rows = 0;  // padded
  std::uint32_t cols = 0;

  bool padded() const noexcept { return rows != orig_rows || cols != orig_cols; }
  friend bool operator==(const CipherHeader&, const CipherHeader&) = default;
};

struct Ciphertext {
  CipherHeader header;
  Image image;
};

/// Working dimensions for an image: multiples of 4 (parity interleave twice),
/// and for binary images columns a multiple of 8 with at least 24 so each of
/// the eight automaton segments has three cells.
inline std::pair<std::size_t, std::size_t> padded_dims(ImageKind kind, std::size_t rows,
                                                       std::size_t cols) {
  if (rows == 0 || cols == 0) throw DimensionError("cannot encrypt an empty image");
  if (rows > kMaxSide || cols > kMaxSide)
    throw DimensionError("image side exceeds " + std::to_string(kMaxSide));
  const auto up = [](std::size_t v, std::size_t k) { return (v + k - 1) / k * k; };
  std::size_t r = std::max<std::size_t>(4, up(rows, 4));
  std::size_t c = std::max<std::size_t>(4, up(cols, 4));
  if (kind == ImageKind::binary) c = std::max<std::size_t>(24, up(cols, 8));
  return {r, c};
}

// ---------------------------------------------------------------------------
// Keystream

struct Keystream {
  std::vector<std::uint8_t> qr;
  std::vector<std::uint8_t> qg;
  std::vector<std::uint8_t> qb;
};

inline Keystream make_keystream(const KeySpace& keys, std::size_t length, const HybridMap& map) {
  const ChaosSeed s = keys.keystream_seed();
  const ChaosMatrix w = sequence(map, s.x0, s.y0, s.r, length);
  Keystream q;
  q.qr.resize(length);
  q.qg.resize(length);
  q.qb.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    q.qr[i] = quantize_byte(w.x[i]);
    q.qg[i] = quantize_byte(w.y[i]);
    q.qb[i] = q.qr[i] ^ q.qg[i];
  }
  return q;
}

inline void xor_plane(Plane& p, const std::vector<std::uint8_t>& q, int shift = 0) {
  for (std::size_t i = 0; i < p.size(); ++i) p[i] ^= static_cast<std::uint8_t>(q[i] >> shift);
}

// ---------------------------------------------------------------------------
// Permutation stages

/// Ring shift amount: first four decimals of the first chaos output.
inline std::uint64_t ring_amount(const KeySpace& keys, const HybridMap& map) {
  const ChaosSeed s = keys.permutation_seed();
  return static_cast<std::uint64_t>(truncated_sequence(map, s.x0, s.y0, s.r, 1, 4, 0).x[0]);
}

namespace detail {

template <class T>
BlockMatrix<T> sub_blocks(const BlockMatrix<T>& bm, std::size_t r0, std::size_t c0,
                          std::size_t rows, std::size_t cols) {
  BlockMatrix<T> out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = bm(r0 + i, c0 + j);
  return out;
}

// C stacks block rows 5 and 6 of the mixed matrix, each cut in two halves.
template <class T>
BlockMatrix<T> center_blocks(const BlockMatrix<T>& bm) {
  BlockMatrix<T> c(4, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    c(0, j) = bm(4, j);
    c(1, j) = bm(4, 4 + j);
    c(2, j) = bm(5, j);
    c(3, j) = bm(5, 4 + j);
  }
  return c;
}

}  // namespace detail

/// Scrambling stages of the color cipher on three equal planes whose sides
/// are multiples of 4. Templated so an index map can be pushed through.
template <class T>
std::array<Matrix<T>, 3> permute_color(std::array<Matrix<T>, 3> planes, const KeySpace& keys,
                                       const HybridMap& map, Direction dir) {
  const std::uint64_t amount = ring_amount(keys, map);
  if (dir == Direction::forward) {
    std::array<BlockMatrix<T>, 3> b;
    for (std::size_t k = 0; k < 3; ++k)
      b[k] = to_blocks(parity_interleave(std::move(planes[k]), 2, dir), 4, 4);
    BlockMatrix<T> mixed = chaotic_block_shift(block_mix(b[0], b[1], b[2]),
                                               keys.permutation_seed(), map, dir);
    std::array<Matrix<T>, 3> lcr{from_blocks(detail::sub_blocks(mixed, 0, 0, 4, 4)),
                                 from_blocks(detail::center_blocks(mixed)),
                                 from_blocks(detail::sub_blocks(mixed, 0, 4, 4, 4))};
    return ring_shift_lcr(std::move(lcr), amount, dir);
  }
  auto lcr = ring_shift_lcr(std::move(planes), amount, dir);
  const BlockMatrix<T> l = to_blocks(lcr[0], 4, 4);
  const BlockMatrix<T> c = to_blocks(lcr[1], 4, 4);
  const BlockMatrix<T> r = to_blocks(lcr[2], 4, 4);
  BlockMatrix<T> mixed(6, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      mixed(i, j) = l(i, j);
      mixed(i, 4 + j) = r(i, j);
    }
  for (std::size_t j = 0; j < 4; ++j) {
    mixed(4, j) = c(0, j);
    mixed(4, 4 + j) = c(1, j);
    mixed(5, j) = c(2, j);
    mixed(5, 4 + j) = c(3, j);
  }
  mixed = chaotic_block_shift(std::move(mixed), keys.permutation_seed(), map, dir);
  auto rgb = block_unmix(mixed);
  std::array<Matrix<T>, 3> out;
  for (std::size_t k = 0; k < 3; ++k)
    out[k] = parity_interleave(from_blocks(rgb[k]), 2, dir);
  return out;
}

template <class T>
Matrix<T> permute_gray(Matrix<T> plane, const KeySpace& keys, const HybridMap& map, Direction dir) {
  const std::uint64_t amount = ring_amount(keys, map);
  if (dir == Direction::forward)
    return ring_shift_gray(parity_interleave(std::move(plane), 2, dir), amount, dir);
  return parity_interleave(ring_shift_gray(std::move(plane), amount, dir), 2, dir);
}

// ---------------------------------------------------------------------------
// Automaton round

/// Rule, repetition and rotation parameters for one plane.
struct RoundSchedule {
  std::vector<Rule> rule1, rule2;
  std::vector<std::size_t> rep1, rep2;
  std::vector<std::uint64_t> rotation;
};

/// One automaton stream per image, consumed per plane as
/// [first pass | rotation | second pass], n/2 outputs each.
inline std::vector<RoundSchedule> round_schedules(const KeySpace& keys, std::size_t planes,
                                                  std::size_t rows, const HybridMap& map) {
  const std::size_t half = rows / 2;
  const ChaosSeed s = keys.automaton_seed();
  const ChaosMatrix w = sequence(map, s.x0, s.y0, s.r, 3 * planes * half);
  const auto rule_of = [&](std::size_t i) {
    return Rule(static_cast<int>(truncate_digits(w.x[i], 1) % 256));
  };
  const auto rep_of = [&](std::size_t i) {
    return static_cast<std::size_t>(truncate_digits(w.y[i], 2) % 16) + 1;
  };
  std::vector<RoundSchedule> out(planes);
  for (std::size_t p = 0; p < planes; ++p) {
    const std::size_t base = 3 * half * p;
    auto& rs = out[p];
    for (std::size_t i = 0; i < half; ++i) {
      rs.rule1.push_back(rule_of(base + i));
      rs.rep1.push_back(rep_of(base + i));
      rs.rotation.push_back(static_cast<std::uint64_t>(truncate_digits(w.x[base + half + i], 4)));
      rs.rule2.push_back(rule_of(base + 2 * half + i));
      rs.rep2.push_back(rep_of(base + 2 * half + i));
    }
  }
  return out;
}

namespace detail {

// Bit matrix: one cell per byte, rows x width.
using BitMatrix = Matrix<std::uint8_t>;

inline BitMatrix to_bit_matrix(const Plane& p, bool binary) {
  if (binary) return p;
  BitMatrix b(p.rows(), 8 * p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    const auto bits = unpack_bits(p.row(i));
    std::copy(bits.begin(), bits.end(), b.row(i).begin());
  }
  return b;
}

inline Plane from_bit_matrix(const BitMatrix& b, bool binary) {
  if (binary) return b;
  Plane p(b.rows(), b.cols() / 8);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    const auto bytes = pack_bits(b.row(i));
    std::copy(bytes.begin(), bytes.end(), p.row(i).begin());
  }
  return p;
}

inline void evolve_pairs(BitMatrix& b, const std::vector<Rule>& rules,
                         const std::vector<std::size_t>& reps, Direction dir) {
  const std::size_t half = b.rows() / 2;
  const std::size_t seg = b.cols() / 8;
  std::vector<std::uint8_t> scratch(seg);
  for (std::size_t i = 0; i < half; ++i)
    for (std::size_t k = 0; k < 8; ++k) {
      auto x = b.row(i).subspan(k * seg, seg);
      auto y = b.row(half + i).subspan(k * seg, seg);
      if (dir == Direction::forward)
        second_order_evolve_inplace(x, y, rules[i], reps[i], scratch);
      else
        second_order_reverse_inplace(x, y, rules[i], reps[i], scratch);
    }
}

// Segments (1,4)(2,7)(3,6)(5,8); an involution.
inline void swap_segments(BitMatrix& b) {
  constexpr std::array<std::pair<std::size_t, std::size_t>, 4> pairs{{{0, 3}, {1, 6}, {2, 5}, {4, 7}}};
  const std::size_t seg = b.cols() / 8;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    auto row = b.row(i);
    for (auto [a, c] : pairs)
      std::swap_ranges(row.begin() + static_cast<std::ptrdiff_t>(a * seg),
                       row.begin() + static_cast<std::ptrdiff_t>((a + 1) * seg),
                       row.begin() + static_cast<std::ptrdiff_t>(c * seg));
  }
}

// Rotates the concatenation [row i, row n/2 + i] right by t.
inline void rotate_pairs(BitMatrix& b, const std::vector<std::uint64_t>& t, Direction dir) {
  const std::size_t half = b.rows() / 2;
  const std::size_t w = b.cols();
  std::vector<std::uint8_t> v(2 * w);
  for (std::size_t i = 0; i < half; ++i) {
    std::size_t k = static_cast<std::size_t>(t[i] % (2 * w));
    if (dir == Direction::inverse) k = (2 * w - k) % (2 * w);
    if (k == 0) continue;
    auto top = b.row(i);
    auto bottom = b.row(half + i);
    std::copy(top.begin(), top.end(), v.begin());
    std::copy(bottom.begin(), bottom.end(), v.begin() + static_cast<std::ptrdiff_t>(w));
    std::rotate(v.rbegin(), v.rbegin() + static_cast<std::ptrdiff_t>(k), v.rend());
    std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(w), top.begin());
    std::copy(v.begin() + static_cast<std::ptrdiff_t>(w), v.end(), bottom.begin());
  }
}

}  // namespace detail

/// Diffusion round on one plane with an even number of rows.
inline Plane automaton_round(const Plane& plane, const RoundSchedule& rs, bool binary,
                             Direction dir) {
  if (plane.rows() % 2 != 0) throw DimensionError("automaton round needs an even row count");
  detail::BitMatrix b = detail::to_bit_matrix(plane, binary);
  if (b.cols() % 8 != 0 || b.cols() / 8 < kMinRowLength)
    throw DimensionError("automaton round needs rows of at least 24 bits in 8 equal segments");
  if (dir == Direction::forward) {
    detail::evolve_pairs(b, rs.rule1, rs.rep1, dir);
    detail::swap_segments(b);
    detail::rotate_pairs(b, rs.rotation, dir);
    detail::evolve_pairs(b, rs.rule2, rs.rep2, dir);
  } else {
    detail::evolve_pairs(b, rs.rule2, rs.rep2, dir);
    detail::rotate_pairs(b, rs.rotation, dir);
    detail::swap_segments(b);
    detail::evolve_pairs(b, rs.rule1, rs.rep1, dir);
  }
  return detail::from_bit_matrix(b, binary);
}

// ---------------------------------------------------------------------------
// Pipelines

inline std::vector<Plane> encrypt_planes(std::vector<Plane> planes, ImageKind kind,
                                         const KeySpace& keys, const HybridMap& map) {
  const bool binary = kind == ImageKind::binary;
  const std::size_t rows = planes[0].rows();
  const std::size_t n = planes[0].size();
  if (kind == ImageKind::color) {
    auto lcr = permute_color<std::uint8_t>({std::move(planes[0]), std::move(planes[1]),
                                            std::move(planes[2])},
                                           keys, map, Direction::forward);
    planes.assign(lcr.begin(), lcr.end());
  } else {
    planes[0] = permute_gray(std::move(planes[0]), keys, map, Direction::forward);
  }
  const auto sched = round_schedules(keys, planes.size(), rows, map);
  for (std::size_t k = 0; k < planes.size(); ++k)
    planes[k] = automaton_round(planes[k], sched[k], binary, Direction::forward);
  const Keystream q = make_keystream(keys, n, map);
  const std::array<const std::vector<std::uint8_t>*, 3> qs{&q.qr, &q.qg, &q.qb};
  for (std::size_t k = 0; k < planes.size(); ++k) xor_plane(planes[k], *qs[k], binary ? 7 : 0);
  return planes;
}

inline std::vector<Plane> decrypt_planes(std::vector<Plane> planes, ImageKind kind,
                                         const KeySpace& keys, const HybridMap& map) {
  const bool binary = kind == ImageKind::binary;
  const std::size_t rows = planes[0].rows();
  const Keystream q = make_keystream(keys, planes[0].size(), map);
  const std::array<const std::vector<std::uint8_t>*, 3> qs{&q.qr, &q.qg, &q.qb};
  for (std::size_t k = 0; k < planes.size(); ++k) xor_plane(planes[k], *qs[k], binary ? 7 : 0);
  const auto sched = round_schedules(keys, planes.size(), rows, map);
  for (std::size_t k = 0; k < planes.size(); ++k)
    planes[k] = automaton_round(planes[k], sched[k], binary, Direction::inverse);
  if (kind == ImageKind::color) {
    auto rgb = permute_color<std::uint8_t>({std::move(planes[0]), std::move(planes[1]),
                                            std::move(planes[2])},
                                           keys, map, Direction::inverse);
    planes.assign(rgb.begin(), rgb.end());
  } else {
    planes[0] = permute_gray(std::move(planes[0]), keys, map, Direction::inverse);
  }
  return planes;
}

inline Ciphertext encrypt(const Image& image, const KeySpace& keys,
                          const HybridMap& map = HybridMap(hybrid_case(3))) {
  const auto [rows, cols] = padded_dims(image.kind(), image.rows(), image.cols());
  CipherHeader h;
  h.kind = image.kind();
  h.orig_rows = static_cast<std::uint32_t>(image.rows());
  h.orig_cols = static_cast<std::uint32_t>(image.cols());
  h.rows = static_cast<std::uint32_t>(rows);
  h.cols = static_cast<std::uint32_t>(cols);
  std::vector<Plane> planes;
  for (const auto& p : image.planes()) planes.push_back(pad_replicate(p, rows, cols));
  return {h, Image(image.kind(), encrypt_planes(std::move(planes), image.kind(), keys, map))};
}

inline Image decrypt(const Ciphertext& ct, const KeySpace& keys,
                     const HybridMap& map = HybridMap(hybrid_case(3))) {
  const CipherHeader& h = ct.header;
  if (h.version != kCipherVersion)
    throw FormatError("unsupported ciphertext version " + std::to_string(h.version));
  if (ct.image.kind() != h.kind) throw FormatError("ciphertext kind does not match its header");
  if (ct.image.rows() != h.rows || ct.image.cols() != h.cols)
    throw DimensionError("ciphertext is " + std::to_string(ct.image.rows()) + "x" +
                         std::to_string(ct.image.cols()) + " but its header says " +
                         std::to_string(h.rows) + "x" + std::to_string(h.cols));
  const auto [rows, cols] = padded_dims(h.kind, h.orig_rows, h.orig_cols);
  if (rows != h.rows || cols != h.cols)
    throw FormatError("header padding does not match the original dimensions");
  auto planes = decrypt_planes(ct.image.planes(), h.kind, keys, map);
  for (auto& p : planes) p = crop(p, h.orig_rows, h.orig_cols);
  return Image(h.kind, std::move(planes));
}

/// Single-plane entry points; `image` must be gray or binary.
inline Ciphertext encrypt_gray(const Image& image, const KeySpace& keys,
                               const HybridMap& map = HybridMap(hybrid_case(3))) {
  if (image.kind() == ImageKind::color) throw DimensionError("encrypt_gray needs a single-plane image");
  return encrypt(image, keys, map);
}

inline Image decrypt_gray(const Ciphertext& ct, const KeySpace& keys,
                          const HybridMap& map = HybridMap(hybrid_case(3))) {
  if (ct.header.kind == ImageKind::color) throw DimensionError("decrypt_gray needs a single-plane ciphertext");
  return decrypt(ct, keys, map);
}

/// Header for a bare ciphertext image whose original dimensions the receiver
/// knows out of band (defaults to no padding).
inline CipherHeader header_for(const Image& ct, std::size_t orig_rows = 0, std::size_t orig_cols = 0) {
  CipherHeader h;
  h.kind = ct.kind();
  h.rows = static_cast<std::uint32_t>(ct.rows());
  h.cols = static_cast<std::uint32_t>(ct.cols());
  h.orig_rows = static_cast<std::uint32_t>(orig_rows ? orig_rows : ct.rows());
  h.orig_cols = static_cast<std::uint32_t>(orig_cols ? orig_cols : ct.cols());
  return h;
}

// ---------------------------------------------------------------------------
// Container: "HCAC", version, kind, then four little-endian u32 (original
// rows, original cols, rows, cols) and the planes in order.

inline constexpr std::array<char, 4> kContainerMagic{'H', 'C', 'A', 'C'};
inline constexpr std::size_t kContainerHeaderSize = 4 + 1 + 1 + 16;

inline std::vector<std::uint8_t> encode_container(const Ciphertext& ct) {
  std::vector<std::uint8_t> out(kContainerMagic.begin(), kContainerMagic.end());
  out.push_back(ct.header.version);
  out.push_back(static_cast<std::uint8_t>(ct.header.kind));
  for (std::uint32_t v : {ct.header.orig_rows, ct.header.orig_cols, ct.header.rows, ct.header.cols})
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  for (const auto& p : ct.image.planes()) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline bool is_container(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 4 && std::equal(kContainerMagic.begin(), kContainerMagic.end(), bytes.begin());
}

inline Ciphertext decode_container(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kContainerHeaderSize || !is_container(bytes))
    throw FormatError("not a ciphertext container");
  CipherHeader h;
  h.version = bytes[4];
  if (h.version != kCipherVersion)
    throw FormatError("unsupported container version " + std::to_string(h.version));
  if (bytes[5] > 2) throw FormatError("container has unknown image kind");
  h.kind = static_cast<ImageKind>(bytes[5]);
  std::array<std::uint32_t, 4> d{};
  for (std::size_t i = 0; i < 4; ++i)
    for (int b = 0; b < 4; ++b) d[i] |= static_cast<std::uint32_t>(bytes[6 + 4 * i + b]) << (8 * b);
  h.orig_rows = d[0];
  h.orig_cols = d[1];
  h.rows = d[2];
  h.cols = d[3];
  if (h.rows > kMaxSide || h.cols > kMaxSide || h.rows == 0 || h.cols == 0)
    throw FormatError("container dimensions out of range");
  const std::size_t plane = static_cast<std::size_t>(h.rows) * h.cols;
  const std::size_t planes = channel_count(h.kind);
  if (bytes.size() != kContainerHeaderSize + plane * planes)
    throw FormatError("container payload is " + std::to_string(bytes.size() - kContainerHeaderSize) +
                      " bytes, expected " + std::to_string(plane * planes));
  std::vector<Plane> ps;
  for (std::size_t k = 0; k < planes; ++k) {
    const auto first = bytes.begin() + static_cast<std::ptrdiff_t>(kContainerHeaderSize + k * plane);
    ps.emplace_back(h.rows, h.cols, std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(plane)));
  }
  return {h, Image(h.kind, std::move(ps))};
}

}  // namespace chaoscrypt
