#pragma once

// Framelet-domain steganography. The cover is spiral shifted (kinds I then
// II), each plane's LL band is quantized to bytes and parity shifted by
// three-digit chaos amounts, and the secret's most significant bits replace
// low LL bits:
//
//   color cover, gray secret   bit 7 -> r bit 0, bit 6 -> g bit 0,
//                              bit 5 -> g bit 1, bit 4 -> b bit 0
//   gray cover, gray secret    bits 7..4 -> LL bits 3..0
//   gray cover, binary secret  bit -> LL bit 0
//
// Synthesis from a modified LL is a projection: re-analysing the stego plane
// sees only part of each change. Refinement passes push the rounded stego
// plane along the minimum-norm direction until the re-analysed bits match.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "chaoscrypt/chaos.hpp"
#include "chaoscrypt/error.hpp"
#include "chaoscrypt/framelet.hpp"
#include "chaoscrypt/hybrid_config.hpp"
#include "chaoscrypt/image.hpp"
#include "chaoscrypt/keygen.hpp"
#include "chaoscrypt/permute.hpp"

namespace chaoscrypt {

enum class StegoTransform { framelet, identity };

inline std::string_view to_string(StegoTransform t) {
  return t == StegoTransform::framelet ? "framelet" : "identity";
}

struct StegoOptions {
  std::uint64_t shift1 = 1000;  // spiral shift I
  std::uint64_t shift2 = 1000;  // spiral shift II
  StegoTransform transform = StegoTransform::framelet;
  int refine_passes = 8;
};

/// Everything the receiver needs besides the keys.
struct EmbedPlan {
  ImageKind cover_kind = ImageKind::color;
  std::size_t cover_rows = 0;
  std::size_t cover_cols = 0;
  ImageKind secret_kind = ImageKind::gray;
  std::size_t secret_rows = 0;
  std::size_t secret_cols = 0;
  std::uint64_t shift1 = 1000;
  std::uint64_t shift2 = 1000;
  StegoTransform transform = StegoTransform::framelet;
  std::uint64_t key_fingerprint = 0;

  friend bool operator==(const EmbedPlan&, const EmbedPlan&) = default;
};

inline std::string serialize(const EmbedPlan& p) {
  char fp[32];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(p.key_fingerprint));
  std::string s;
  s += "cover_kind " + std::string(to_string(p.cover_kind)) + "\n";
  s += "cover_rows " + std::to_string(p.cover_rows) + "\n";
  s += "cover_cols " + std::to_string(p.cover_cols) + "\n";
  s += "secret_kind " + std::string(to_string(p.secret_kind)) + "\n";
  s += "secret_rows " + std::to_string(p.secret_rows) + "\n";
  s += "secret_cols " + std::to_string(p.secret_cols) + "\n";
  s += "shift1 " + std::to_string(p.shift1) + "\n";
  s += "shift2 " + std::to_string(p.shift2) + "\n";
  s += "transform " + std::string(to_string(p.transform)) + "\n";
  s += "key_fingerprint " + std::string(fp) + "\n";
  return s;
}

inline EmbedPlan parse_embed_plan(std::string_view text) {
  EmbedPlan p;
  int seen = 0;
  std::size_t pos = 0;
  const auto number = [](std::string_view v, std::string_view name, int base) {
    unsigned long long x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x, base);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      throw FormatError("plan file: bad value for " + std::string(name));
    return static_cast<std::uint64_t>(x);
  };
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = detail::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) throw FormatError("plan file: expected 'name value'");
    const std::string_view name = line.substr(0, sp);
    const std::string_view v = detail::trim(line.substr(sp + 1));
    if (name == "cover_kind") p.cover_kind = parse_image_kind(v);
    else if (name == "cover_rows") p.cover_rows = number(v, name, 10);
    else if (name == "cover_cols") p.cover_cols = number(v, name, 10);
    else if (name == "secret_kind") p.secret_kind = parse_image_kind(v);
    else if (name == "secret_rows") p.secret_rows = number(v, name, 10);
    else if (name == "secret_cols") p.secret_cols = number(v, name, 10);
    else if (name == "shift1") p.shift1 = number(v, name, 10);
    else if (name == "shift2") p.shift2 = number(v, name, 10);
    else if (name == "transform") {
      if (v == "framelet") p.transform = StegoTransform::framelet;
      else if (v == "identity") p.transform = StegoTransform::identity;
      else throw FormatError("plan file: unknown transform '" + std::string(v) + "'");
    } else if (name == "key_fingerprint") p.key_fingerprint = number(v, name, 16);
    else throw FormatError("plan file: unknown field '" + std::string(name) + "'");
    ++seen;
  }
  if (seen < 9) throw FormatError("plan file is incomplete");
  return p;
}

namespace detail {

// One secret bit placed in one LL byte.
struct BitSlot {
  std::uint8_t plane;
  std::uint8_t ll_bit;
  std::uint8_t secret_bit;  // 0 = least significant; binary secrets use 0
};

inline std::vector<BitSlot> slot_layout(ImageKind cover, ImageKind secret) {
  if (cover == ImageKind::color && secret == ImageKind::gray)
    return {{0, 0, 7}, {1, 0, 6}, {1, 1, 5}, {2, 0, 4}};
  if (cover == ImageKind::gray && secret == ImageKind::gray)
    return {{0, 3, 7}, {0, 2, 6}, {0, 1, 5}, {0, 0, 4}};
  if (cover == ImageKind::gray && secret == ImageKind::binary) return {{0, 0, 0}};
  throw DimensionError("unsupported cover/secret combination: " + std::string(to_string(secret)) +
                       " in " + std::string(to_string(cover)));
}

inline void check_capacity(const EmbedPlan& p) {
  slot_layout(p.cover_kind, p.secret_kind);
  if (p.cover_rows < 3 || p.cover_cols < 3) throw DimensionError("cover must be at least 3x3");
  if (p.secret_rows == 0 || p.secret_cols == 0) throw DimensionError("secret image is empty");
  if (p.secret_rows > p.cover_rows || p.secret_cols > p.cover_cols)
    throw CapacityError("secret " + std::to_string(p.secret_rows) + "x" + std::to_string(p.secret_cols) +
                        " exceeds cover " + std::to_string(p.cover_rows) + "x" + std::to_string(p.cover_cols));
  if (p.cover_kind == ImageKind::color && 3 * p.secret_rows * p.secret_cols > p.cover_rows * p.cover_cols)
    throw CapacityError("secret has more than a third of the cover's pixels");
}

inline std::vector<Plane> forward_spirals(std::vector<Plane> planes, const EmbedPlan& p) {
  planes = spiral_shift(std::move(planes), SpiralKind::one, p.shift1, Direction::forward);
  return spiral_shift(std::move(planes), SpiralKind::two, p.shift2, Direction::forward);
}

inline std::vector<Plane> inverse_spirals(std::vector<Plane> planes, const EmbedPlan& p) {
  planes = spiral_shift(std::move(planes), SpiralKind::two, p.shift2, Direction::inverse);
  return spiral_shift(std::move(planes), SpiralKind::one, p.shift1, Direction::inverse);
}

inline RealPlane analysis_ll(const RealPlane& plane, StegoTransform t) {
  return t == StegoTransform::framelet ? lowpass_ll(plane) : plane;
}

// shifted[k] = unshifted linear index that lands at position k.
inline std::vector<std::uint32_t> ll_shift_map(std::size_t rows, std::size_t cols, const KeySpace& keys,
                                               const HybridMap& map) {
  Matrix<std::uint32_t> idx(rows, cols);
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<std::uint32_t>(k);
  return rowcol_chaotic_shift(std::move(idx), keys.permutation_seed(), map, 3, Direction::forward).data();
}

// Nearest integer in [0, 255] to v whose bits under `mask` equal `want`.
inline int nearest_with_bits(double v, int mask, int want) {
  int best = -1;
  double best_d = 1e300;
  const int c = static_cast<int>(std::lround(v));
  for (int t = std::max(0, c - 2 * mask - 2); t <= std::min(255, c + 2 * mask + 2); ++t)
    if ((t & mask) == want && std::abs(t - v) < best_d) {
      best_d = std::abs(t - v);
      best = t;
    }
  if (best < 0)
    for (int t = 0; t <= 255; ++t)
      if ((t & mask) == want && std::abs(t - v) < best_d) {
        best_d = std::abs(t - v);
        best = t;
      }
  return best;
}

// Required (mask, bits) for every LL byte, in unshifted coordinates.
struct LlTargets {
  std::vector<std::vector<std::uint32_t>> index;  // per plane
  std::vector<std::vector<std::uint8_t>> mask;
  std::vector<std::vector<std::uint8_t>> bits;
};

inline LlTargets ll_targets(const Image& secret, const EmbedPlan& p, const std::vector<std::uint32_t>& unshift) {
  const auto layout = slot_layout(p.cover_kind, p.secret_kind);
  const std::size_t planes = channel_count(p.cover_kind);
  LlTargets t;
  t.index.resize(planes);
  t.mask.resize(planes);
  t.bits.resize(planes);
  for (std::size_t pl = 0; pl < planes; ++pl)
    for (std::size_t i = 0; i < p.secret_rows; ++i)
      for (std::size_t j = 0; j < p.secret_cols; ++j) {
        std::uint8_t mask = 0, bits = 0;
        const std::uint8_t s = secret.at(i, j);
        for (const auto& sl : layout)
          if (sl.plane == pl) {
            mask |= static_cast<std::uint8_t>(1u << sl.ll_bit);
            bits |= static_cast<std::uint8_t>(((s >> sl.secret_bit) & 1u) << sl.ll_bit);
          }
        if (!mask) continue;
        t.index[pl].push_back(unshift[i * p.cover_cols + j]);
        t.mask[pl].push_back(mask);
        t.bits[pl].push_back(bits);
      }
  return t;
}

inline RealPlane to_real(const Plane& p) { return matrix_cast<double>(p); }

// Lowpass analysis kernel [1 2 1; 2 4 2; 1 2 1] / 16 around `idx`, periodic;
// calls f(pixel_index, weight).
template <class F>
void for_kernel(std::size_t rows, std::size_t cols, std::size_t idx, F&& f) {
  static constexpr std::array<double, 3> w{0.25, 0.5, 0.25};
  const std::size_t r = idx / cols, c = idx % cols;
  for (std::size_t dr = 0; dr < 3; ++dr)
    for (std::size_t dc = 0; dc < 3; ++dc)
      f(((r + rows + dr - 1) % rows) * cols + (c + cols + dc - 1) % cols, w[dr] * w[dc]);
}

// Minimum-norm pixel change d with (A d)_s = e_s at every slot s, where A is
// the lowpass analysis: d = A_S^T y with (A_S A_S^T) y = e, solved by
// conjugate gradients.
inline RealPlane min_norm_update(std::size_t rows, std::size_t cols,
                                 const std::vector<std::uint32_t>& slots,
                                 const std::vector<double>& e, int iterations = 200) {
  const std::size_t n = slots.size();
  RealPlane scratch(rows, cols, 0.0);
  const auto apply = [&](const std::vector<double>& y, std::vector<double>& out) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s)
      for_kernel(rows, cols, slots[s], [&](std::size_t i, double w) { scratch[i] += w * y[s]; });
    for (std::size_t s = 0; s < n; ++s) {
      double acc = 0.0;
      for_kernel(rows, cols, slots[s], [&](std::size_t i, double w) { acc += w * scratch[i]; });
      out[s] = acc;
    }
  };
  std::vector<double> y(n, 0.0), r = e, p = e, ap(n);
  double rr = 0.0;
  for (double v : r) rr += v * v;
  const double stop = 1e-12 * std::max(rr, 1.0);
  for (int it = 0; it < iterations && rr > stop; ++it) {
    apply(p, ap);
    double pap = 0.0;
    for (std::size_t s = 0; s < n; ++s) pap += p[s] * ap[s];
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    double rr_new = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      y[s] += alpha * p[s];
      r[s] -= alpha * ap[s];
      rr_new += r[s] * r[s];
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t s = 0; s < n; ++s) p[s] = r[s] + beta * p[s];
  }
  RealPlane d(rows, cols, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for_kernel(rows, cols, slots[s], [&](std::size_t i, double w) { d[i] += w * y[s]; });
  return d;
}

// Distance from v to the nearest value whose rounding carries the bits.
inline double slot_cost(double v, int mask, int want) {
  const int have = static_cast<int>(std::clamp(std::round(v), 0.0, 255.0));
  if ((have & mask) == want) return 0.0;
  return std::abs(nearest_with_bits(v, mask, want) - v);
}

// Integer local search on pixels around the remaining wrong slots: a move
// adds a small step to one pixel and is kept when the summed slot cost of the
// LL bytes it touches drops. Catches rounding and clamping leftovers.
inline std::size_t polish_plane(Plane& out, const std::vector<std::uint32_t>& slots,
                                const std::vector<std::uint8_t>& mask,
                                const std::vector<std::uint8_t>& bits, int rounds) {
  const std::size_t rows = out.rows(), cols = out.cols();
  RealPlane ll = lowpass_ll(to_real(out));
  std::vector<std::int32_t> slot_at(out.size(), -1);
  for (std::size_t s = 0; s < slots.size(); ++s) slot_at[slots[s]] = static_cast<std::int32_t>(s);
  const auto cost_at = [&](std::size_t q) {
    const std::int32_t s = slot_at[q];
    return s < 0 ? 0.0 : slot_cost(ll[q], mask[s], bits[s]);
  };
  static constexpr std::array<int, 16> steps{1, -1, 2, -2, 3, -3, 4, -4, 6, -6, 8, -8, 12, -12, 16, -16};
  const auto shift = [&](std::size_t p, int st) {
    for_kernel(rows, cols, p, [&](std::size_t q, double w) { ll[q] += w * st; });
  };
  const auto legal = [&](std::size_t p, int st) { return out[p] + st >= 0 && out[p] + st <= 255; };
  std::size_t wrong = 0;
  for (int round = 0; round < rounds; ++round) {
    bool moved = false;
    wrong = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (cost_at(slots[s]) == 0.0) continue;
      ++wrong;
      // every LL byte a kernel pixel of s can reach: the 5x5 window around s
      std::vector<std::size_t> pix, window;
      for_kernel(rows, cols, slots[s], [&](std::size_t i, double) { pix.push_back(i); });
      for (std::size_t i : pix) for_kernel(rows, cols, i, [&](std::size_t q, double) { window.push_back(q); });
      std::sort(window.begin(), window.end());
      window.erase(std::unique(window.begin(), window.end()), window.end());
      // wrong bytes weigh more than any summed distance
      const auto score = [&] {
        double sc = 0.0;
        for (std::size_t q : window) {
          const double c = cost_at(q);
          sc += c + (c > 0.0 ? 1000.0 : 0.0);
        }
        return sc;
      };
      double best = score() - 1e-9;
      std::size_t bp1 = 0, bp2 = 0;
      int bs1 = 0, bs2 = 0;
      for (std::size_t a = 0; a < pix.size(); ++a)
        for (int s1 : steps) {
          if (!legal(pix[a], s1)) continue;
          shift(pix[a], s1);
          const double sc = score();
          if (sc < best) {
            best = sc;
            bp1 = pix[a];
            bs1 = s1;
          }
          shift(pix[a], -s1);
        }
      // pairs only when no single step helps
      if (bs1 == 0)
        for (std::size_t a = 0; a < pix.size(); ++a)
          for (std::size_t b = a + 1; b < pix.size(); ++b)
            for (int s1 : steps) {
              if (!legal(pix[a], s1)) continue;
              shift(pix[a], s1);
              for (int s2 : steps) {
                if (!legal(pix[b], s2)) continue;
                shift(pix[b], s2);
                const double sc = score();
                if (sc < best) {
                  best = sc;
                  bp1 = pix[a];
                  bs1 = s1;
                  bp2 = pix[b];
                  bs2 = s2;
                }
                shift(pix[b], -s2);
              }
              shift(pix[a], -s1);
            }
      if (bs1 != 0) {
        out[bp1] = static_cast<std::uint8_t>(out[bp1] + bs1);
        shift(bp1, bs1);
        if (bs2 != 0) {
          out[bp2] = static_cast<std::uint8_t>(out[bp2] + bs2);
          shift(bp2, bs2);
        }
        moved = true;
      }
    }
    if (wrong == 0 || !moved) break;
  }
  wrong = 0;
  for (std::size_t s = 0; s < slots.size(); ++s) wrong += cost_at(slots[s]) != 0.0;
  return wrong;
}

// Moves the rounded plane so every slot's re-analysed LL byte sits at the
// centre of a value carrying the required bits, then polishes what rounding
// left over. Returns the number of slots still wrong.
inline std::size_t refine_plane(Plane& out, const std::vector<std::uint32_t>& slots,
                                const std::vector<std::uint8_t>& mask,
                                const std::vector<std::uint8_t>& bits, int passes) {
  std::size_t wrong = 0;
  std::vector<double> e(slots.size());
  for (int pass = 0; pass < passes; ++pass) {
    const RealPlane ll = lowpass_ll(to_real(out));
    wrong = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const double v = ll[slots[s]];
      const int have = static_cast<int>(std::clamp(std::round(v), 0.0, 255.0));
      const bool ok = (have & mask[s]) == bits[s];
      wrong += !ok;
      e[s] = (ok ? have : nearest_with_bits(v, mask[s], bits[s])) - v;
    }
    if (wrong == 0) return 0;
    const RealPlane d = min_norm_update(out.rows(), out.cols(), slots, e);
    RealPlane next = to_real(out);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += d[i];
    out = quantize_to_bytes(next);
  }
  return polish_plane(out, slots, mask, bits, 4 * passes + 8);
}

}  // namespace detail

inline EmbedPlan make_plan(const Image& cover, const Image& secret, const KeySpace& keys,
                           const StegoOptions& opt = {}) {
  EmbedPlan p;
  p.cover_kind = cover.kind();
  p.cover_rows = cover.rows();
  p.cover_cols = cover.cols();
  p.secret_kind = secret.kind();
  p.secret_rows = secret.rows();
  p.secret_cols = secret.cols();
  p.shift1 = opt.shift1;
  p.shift2 = opt.shift2;
  p.transform = opt.transform;
  p.key_fingerprint = key_fingerprint(keys);
  return p;
}

struct EmbedResult {
  Image stego;
  EmbedPlan plan;
  std::size_t wrong_slots = 0;  // LL bytes whose re-analysed bits still differ
};

inline EmbedResult embed_any(const Image& cover, const Image& secret, const KeySpace& keys,
                             const HybridMap& map, const StegoOptions& opt) {
  EmbedPlan plan = make_plan(cover, secret, keys, opt);
  detail::check_capacity(plan);
  const std::size_t rows = plan.cover_rows, cols = plan.cover_cols;
  const auto unshift = detail::ll_shift_map(rows, cols, keys, map);
  const auto targets = detail::ll_targets(secret, plan, unshift);

  std::vector<Plane> planes = detail::forward_spirals(cover.planes(), plan);
  EmbedResult res;
  for (std::size_t k = 0; k < planes.size(); ++k) {
    const RealPlane x = detail::to_real(planes[k]);
    // LL quantized, bits written, then re-inserted in place of the real band.
    Plane llq = quantize_to_bytes(detail::analysis_ll(x, opt.transform));
    for (std::size_t s = 0; s < targets.index[k].size(); ++s) {
      auto& v = llq[targets.index[k][s]];
      v = static_cast<std::uint8_t>((v & ~targets.mask[k][s]) | targets.bits[k][s]);
    }
    RealPlane y;
    if (opt.transform == StegoTransform::framelet)
      y = framelet_inverse(set_ll(framelet_forward(x), detail::to_real(llq)));
    else
      y = detail::to_real(llq);
    Plane out = quantize_to_bytes(y);

    if (opt.transform == StegoTransform::framelet && opt.refine_passes > 0)
      detail::refine_plane(out, targets.index[k], targets.mask[k], targets.bits[k], opt.refine_passes);
    planes[k] = std::move(out);
  }
  planes = detail::inverse_spirals(std::move(planes), plan);
  res.stego = Image(cover.kind(), std::move(planes));
  res.plan = plan;
  // Count residual errors by extraction-side analysis.
  {
    const auto shifted = detail::forward_spirals(res.stego.planes(), plan);
    for (std::size_t k = 0; k < shifted.size(); ++k) {
      const Plane llq = quantize_to_bytes(detail::analysis_ll(detail::to_real(shifted[k]), opt.transform));
      for (std::size_t s = 0; s < targets.index[k].size(); ++s)
        res.wrong_slots += (llq[targets.index[k][s]] & targets.mask[k][s]) != targets.bits[k][s];
    }
  }
  return res;
}

/// Gray secret in a color cover.
inline EmbedResult embed(const Image& cover, const Image& secret, const KeySpace& keys,
                         const HybridMap& map = HybridMap(hybrid_case(3)), const StegoOptions& opt = {}) {
  if (cover.kind() != ImageKind::color) throw DimensionError("embed needs a color cover");
  if (secret.kind() != ImageKind::gray) throw DimensionError("embed needs a grayscale secret");
  return embed_any(cover, secret, keys, map, opt);
}

inline EmbedResult embed_gray(const Image& cover, const Image& secret, const KeySpace& keys,
                              const HybridMap& map = HybridMap(hybrid_case(3)), const StegoOptions& opt = {}) {
  if (cover.kind() != ImageKind::gray || secret.kind() != ImageKind::gray)
    throw DimensionError("embed_gray needs a grayscale cover and secret");
  return embed_any(cover, secret, keys, map, opt);
}

inline EmbedResult embed_binary(const Image& cover, const Image& secret, const KeySpace& keys,
                                const HybridMap& map = HybridMap(hybrid_case(3)), const StegoOptions& opt = {}) {
  if (cover.kind() != ImageKind::gray || secret.kind() != ImageKind::binary)
    throw DimensionError("embed_binary needs a grayscale cover and a binary secret");
  return embed_any(cover, secret, keys, map, opt);
}

/// Recovers the secret: MSBs from the LL bits, low nibble zero (gray), or the
/// bit itself (binary).
inline Image extract(const Image& stego, const KeySpace& keys, const EmbedPlan& plan,
                     const HybridMap& map = HybridMap(hybrid_case(3))) {
  if (stego.kind() != plan.cover_kind || stego.rows() != plan.cover_rows || stego.cols() != plan.cover_cols)
    throw DimensionError("stego image does not match the plan's cover dimensions");
  detail::check_capacity(plan);
  const auto layout = detail::slot_layout(plan.cover_kind, plan.secret_kind);
  const auto unshift = detail::ll_shift_map(plan.cover_rows, plan.cover_cols, keys, map);
  const auto shifted = detail::forward_spirals(stego.planes(), plan);
  std::vector<Plane> ll;
  for (const auto& p : shifted)
    ll.push_back(quantize_to_bytes(detail::analysis_ll(detail::to_real(p), plan.transform)));
  Image out(plan.secret_kind, plan.secret_rows, plan.secret_cols);
  for (std::size_t i = 0; i < plan.secret_rows; ++i)
    for (std::size_t j = 0; j < plan.secret_cols; ++j) {
      const std::size_t idx = unshift[i * plan.cover_cols + j];
      std::uint8_t s = 0;
      for (const auto& sl : layout)
        s |= static_cast<std::uint8_t>(((ll[sl.plane][idx] >> sl.ll_bit) & 1u) << sl.secret_bit);
      out.at(i, j) = s;
    }
  return out;
}

}  // namespace chaoscrypt
