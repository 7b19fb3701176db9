#pragma once

// Dynamic key generation. x0_1 and y0_2 depend only on (image, text, r1, r2);
// x0_2 and y0_1 additionally absorb a random nonce drawn per run.

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaoscrypt/automata.hpp"
#include "chaoscrypt/chaos.hpp"
#include "chaoscrypt/error.hpp"
#include "chaoscrypt/hybrid_config.hpp"
#include "chaoscrypt/image.hpp"

namespace chaoscrypt {

struct KeySpace {
  double r1 = 0.0;
  double r2 = 0.0;
  double x0_1 = 0.0;
  double y0_1 = 0.0;
  double x0_2 = 0.0;
  double y0_2 = 0.0;
  ChaosState nonce{};

  ChaosSeed permutation_seed() const noexcept { return {x0_1, y0_1, r1}; }
  ChaosSeed automaton_seed() const noexcept { return {x0_2, y0_2, r2}; }
  ChaosSeed keystream_seed() const noexcept {
    return {(x0_1 + x0_2) / 2.0, (y0_1 + y0_2) / 2.0, std::max(r1, r2)};
  }

  friend bool operator==(const KeySpace&, const KeySpace&) = default;
};

inline constexpr std::array<std::string_view, 8> kKeyFields{
    "r1", "r2", "x0_1", "y0_1", "x0_2", "y0_2", "nonce_x", "nonce_y"};

namespace detail {

inline std::array<double*, 8> key_slots(KeySpace& k) {
  return {&k.r1, &k.r2, &k.x0_1, &k.y0_1, &k.x0_2, &k.y0_2, &k.nonce.x, &k.nonce.y};
}

}  // namespace detail

/// One `name value` line per field, 17 significant digits.
inline std::string serialize(const KeySpace& keys) {
  KeySpace k = keys;
  const auto slots = detail::key_slots(k);
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *slots[i]);
    out += std::string(kKeyFields[i]) + " " + buf + "\n";
  }
  return out;
}

inline KeySpace parse_key_space(std::string_view text) {
  KeySpace k;
  auto slots = detail::key_slots(k);
  std::array<bool, 8> seen{};
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = detail::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t sp = line.find_first_of(" \t=");
    if (sp == std::string_view::npos)
      throw FormatError("key file line " + std::to_string(line_no) + ": expected 'name value'");
    const std::string_view name = detail::trim(line.substr(0, sp));
    std::string_view value = detail::trim(line.substr(sp + 1));
    if (!value.empty() && value.front() == '=') value = detail::trim(value.substr(1));
    std::size_t idx = kKeyFields.size();
    for (std::size_t i = 0; i < kKeyFields.size(); ++i)
      if (kKeyFields[i] == name) idx = i;
    if (idx == kKeyFields.size())
      throw FormatError("key file line " + std::to_string(line_no) + ": unknown field '" +
                        std::string(name) + "'");
    if (seen[idx]) throw FormatError("key file: duplicate field '" + std::string(name) + "'");
    seen[idx] = true;
    try {
      *slots[idx] = detail::parse_double(value, name);
    } catch (const ConfigError& e) {
      throw FormatError(std::string("key file: ") + e.what());
    }
  }
  for (std::size_t i = 0; i < 6; ++i)
    if (!seen[i]) throw FormatError("key file: missing field '" + std::string(kKeyFields[i]) + "'");
  if (!(k.r1 > 0.0) || !(k.r2 > 0.0)) throw FormatError("key file: r1 and r2 must be positive");
  for (double v : {k.x0_1, k.y0_1, k.x0_2, k.y0_2})
    if (!(v >= 0.0 && v < 1.0)) throw FormatError("key file: initial values must lie in [0, 1)");
  return k;
}

/// 64-bit FNV-1a of the serialized keys, used to tie side files to a key.
inline std::uint64_t key_fingerprint(const KeySpace& k) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize(k)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Uniform double in the open interval (0, 1).
template <class Rng>
double open_unit(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Text vector T of length m.
inline std::vector<std::uint8_t> derive_text_vector(std::span<const std::uint8_t> text, double x0_1,
                                                    double r1, std::size_t m,
                                                    const HybridMap& map) {
  if (m == 0) throw DimensionError("text vector length must be positive");
  std::uint8_t fold = 0;
  for (auto b : text) fold ^= b;
  const double y0 = fold / 256.0;

  std::vector<std::uint8_t> t(m, 0);
  if (text.size() > m) {
    const ChaosMatrix w = sequence(map, x0_1, y0, r1, m);
    for (std::size_t i = 0; i < m; ++i)
      t[i] = text[i] ^ quantize_byte(w.x[i]) ^ quantize_byte(w.y[i]);
    return t;
  }
  // Equal or shorter text (zero padded): interleave x1, y1, x2, y2, ...
  const ChaosMatrix w = sequence(map, x0_1, y0, r1, m / 2 + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = i % 2 == 0 ? w.x[i / 2] : w.y[i / 2];
    t[i] = (i < text.size() ? text[i] : 0) ^ quantize_byte(v);
  }
  return t;
}

/// The intermediate values of one key derivation, for inspection and tests.
struct KeyTrace {
  std::vector<std::uint8_t> xi1;
  std::vector<std::uint8_t> xi2;
  std::vector<double> v1;
  std::vector<double> v2;
  std::vector<double> v3;
  std::vector<std::uint8_t> text_vector;
  std::array<double, 8> delta{};
};

namespace detail {

inline Plane duplicate_last_row_if_odd(const Plane& p) {
  return p.rows() % 2 == 0 ? p : pad_replicate(p, p.rows() + 1, p.cols());
}

// Chaos matrix Psi of one plane, quantized to bytes.
inline Plane psi_plane(const Plane& p, double r1, const HybridMap& map) {
  const std::size_t n = p.rows();
  const std::size_t m = p.cols();
  RealPlane psi(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (auto v : p.row(i)) s += v;
    psi(i, 0) = s / (256.0 * static_cast<double>(m));
  }
  if (m > 1)
    for (std::size_t j = 0; j + 1 < n; j += 2) {
      const ChaosMatrix w = sequence(map, psi(j, 0), psi(j + 1, 0), r1, m);
      for (std::size_t c = 1; c < m; ++c) {
        psi(j, c) = w.x[c - 1];
        psi(j + 1, c) = w.y[c - 1];
      }
    }
  Plane q(n, m);
  for (std::size_t i = 0; i < psi.size(); ++i) q[i] = quantize_byte(psi[i]);
  return q;
}

}  // namespace detail

template <class Rng>
KeySpace generate_keys(const Image& image, std::span<const std::uint8_t> text, double r1, double r2,
                       Rng& rng, const HybridMap& map = HybridMap(hybrid_case(3)),
                       KeyTrace* trace = nullptr) {
  if (image.rows() == 0 || image.cols() == 0) throw DimensionError("key generation needs a nonempty image");
  if (text.empty()) throw ConfigError("key generation needs a nonempty text");
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw ConfigError("r1 and r2 must be positive");
  const std::size_t m = image.cols();
  if (m < kMinRowLength) throw DimensionError("key generation needs at least 3 columns");

  // XOR folds of the image against its chaos matrix
  const std::size_t n = image.rows() + image.rows() % 2;
  std::vector<std::uint8_t> xi1(m, 0), xi2(n, 0);
  for (const Plane& src : image.planes()) {
    const Plane p = detail::duplicate_last_row_if_odd(src);
    const Plane psi = detail::psi_plane(p, r1, map);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const std::uint8_t u = p(i, j) ^ psi(i, j);
        xi1[j] ^= u;
        xi2[i] ^= u;
      }
  }

  // v1, v2
  const double c = static_cast<double>(image.channels());
  double s1 = 0.0, s2 = 0.0;
  for (auto v : xi1) s1 += v;
  for (auto v : xi2) s2 += v;
  const ChaosMatrix w =
      sequence(map, mod1(s1 / (static_cast<double>(n) * 256.0 * c)),
               mod1(s2 / (static_cast<double>(m) * 256.0 * c)), r2, n);

  // x0_1 from the middle of v1 and v2
  KeySpace k;
  k.r1 = r1;
  k.r2 = r2;
  k.x0_1 = mod1((w.x[n / 2 - 1] + w.y[n / 2 - 1]) / 2.0);

  // text vector, split into eight rotated bit segments
  const auto t = derive_text_vector(text, k.x0_1, r1, m, map);
  const BitRow bits = unpack_bits(t);
  std::array<BitRow, 8> seg;
  std::array<double, 8> delta{};
  for (std::size_t i = 0; i < 8; ++i) {
    seg[i].assign(bits.begin() + static_cast<std::ptrdiff_t>(i * m),
                  bits.begin() + static_cast<std::ptrdiff_t>((i + 1) * m));
    std::rotate(seg[i].rbegin(), seg[i].rbegin() + 5 % static_cast<std::ptrdiff_t>(m), seg[i].rend());
    std::size_t ones = 0;
    for (auto b : seg[i]) ones += b;
    delta[i] = static_cast<double>(ones + 1) / static_cast<double>(m + 2);
  }

  // v3: each segment through the irreversible automaton
  BitRow evolved;
  evolved.reserve(8 * m);
  for (std::size_t i = 0; i < 8; ++i) {
    const DigitMatrix d = truncated_sequence(map, delta[i], delta[(i + 1) % 8], r2, 1, 10, 10);
    const Rule rule(static_cast<int>(((d.x[0] % 256) + 256) % 256));
    const std::size_t rep = static_cast<std::size_t>(((d.y[0] % 16) + 16) % 16) + 1;
    const BitRow s = iterate_irreversible(seg[i], rule, rep);
    evolved.insert(evolved.end(), s.begin(), s.end());
  }
  const auto packed = pack_bits(evolved);
  std::vector<double> v3(packed.size());
  for (std::size_t i = 0; i < packed.size(); ++i) v3[i] = packed[i] / 256.0;

  // remaining keys; the nonce only reaches x0_2 and y0_1
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += w.x[i] + w.y[i];
  for (double v : v3) total += v;
  k.y0_2 = mod1(total);

  k.nonce.x = open_unit(rng);
  k.nonce.y = open_unit(rng);
  const ChaosMatrix z = sequence(map, k.nonce.x, k.nonce.y, r2, m);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += z.x[i];
    sy += z.y[i];
  }
  k.x0_2 = mod1(k.x0_1 + sx);
  k.y0_1 = mod1(k.y0_2 + sy);

  if (trace) {
    trace->xi1 = std::move(xi1);
    trace->xi2 = std::move(xi2);
    trace->v1 = w.x;
    trace->v2 = w.y;
    trace->v3 = std::move(v3);
    trace->text_vector = t;
    trace->delta = delta;
  }
  return k;
}

template <class Rng>
KeySpace generate_keys(const Image& image, std::string_view text, double r1, double r2, Rng& rng,
                       const HybridMap& map = HybridMap(hybrid_case(3))) {
  return generate_keys(image,
                       std::span<const std::uint8_t>(
                           reinterpret_cast<const std::uint8_t*>(text.data()), text.size()),
                       r1, r2, rng, map);
}

}  // namespace chaoscrypt
