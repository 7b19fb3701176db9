#pragma once

// Elementary (radius-1, two-state) cellular automata on periodic rows, the
// irreversible iterator and the second-order reversible construction
// s_{t+1} = F(s_t) XOR s_{t-1}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaoscrypt/error.hpp"

namespace chaoscrypt {

/// One cell per byte, values 0 or 1.
using BitRow = std::vector<std::uint8_t>;

/// Wolfram rule number of an elementary automaton.
class Rule {
 public:
  constexpr Rule() = default;
  constexpr explicit Rule(int value) : value_(static_cast<std::uint8_t>(value)) {
    if (value < 0 || value > 255)
      throw ConfigError("rule number must be in [0, 255], got " + std::to_string(value));
  }

  constexpr std::uint8_t value() const noexcept { return value_; }
  constexpr std::uint8_t next(unsigned left, unsigned center, unsigned right) const noexcept {
    return (value_ >> ((left << 2) | (center << 1) | right)) & 1u;
  }

  friend constexpr bool operator==(Rule, Rule) = default;

 private:
  std::uint8_t value_ = 0;
};

inline constexpr std::size_t kMinRowLength = 3;

namespace detail {

inline void require_row(std::size_t n) {
  if (n < kMinRowLength)
    throw DimensionError("automaton rows need at least 3 cells, got " + std::to_string(n));
}

}  // namespace detail

/// Writes one synchronous update of `in` into `out` (same length, distinct buffers).
inline void ca_step_into(std::span<const std::uint8_t> in, std::span<std::uint8_t> out,
                         Rule rule) noexcept {
  const std::size_t n = in.size();
  out[0] = rule.next(in[n - 1], in[0], in[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = rule.next(in[i - 1], in[i], in[i + 1]);
  out[n - 1] = rule.next(in[n - 2], in[n - 1], in[0]);
}

inline BitRow ca_step(const BitRow& row, Rule rule) {
  detail::require_row(row.size());
  BitRow out(row.size());
  ca_step_into(row, out, rule);
  return out;
}

/// rep applications of ca_step; rep = 0 is the identity.
inline BitRow iterate_irreversible(BitRow row, Rule rule, std::size_t rep) {
  if (rep == 0) return row;
  detail::require_row(row.size());
  BitRow next(row.size());
  for (std::size_t t = 0; t < rep; ++t) {
    ca_step_into(row, next, rule);
    row.swap(next);
  }
  return row;
}

namespace detail {

// One second-order update in place: older <- F(newer) XOR older. The caller
// swaps roles afterwards. `scratch` has the row length.
inline void second_order_update(std::span<std::uint8_t> older, std::span<const std::uint8_t> newer,
                                std::span<std::uint8_t> scratch, Rule rule) noexcept {
  ca_step_into(newer, scratch, rule);
  for (std::size_t i = 0; i < older.size(); ++i) older[i] ^= scratch[i];
}

}  // namespace detail

/// Evolves (s_{t-1}, s_t) = (prev, curr) by `rep` reversible steps in place,
/// leaving the final pair (s_{t+rep-1}, s_{t+rep}) in (prev, curr).
inline void second_order_evolve_inplace(std::span<std::uint8_t> prev, std::span<std::uint8_t> curr,
                                        Rule rule, std::size_t rep,
                                        std::span<std::uint8_t> scratch) noexcept {
  for (std::size_t t = 0; t < rep; ++t) {
    detail::second_order_update(prev, curr, scratch, rule);
    std::swap(prev, curr);
  }
  if (rep % 2 == 1)
    for (std::size_t i = 0; i < prev.size(); ++i) std::swap(prev[i], curr[i]);
}

/// Exact inverse of second_order_evolve_inplace.
inline void second_order_reverse_inplace(std::span<std::uint8_t> prev, std::span<std::uint8_t> curr,
                                         Rule rule, std::size_t rep,
                                         std::span<std::uint8_t> scratch) noexcept {
  // (a, b) = (s_{t-1}, s_t) -> (s_{t-2}, s_{t-1}) = (F(a) XOR b, a)
  for (std::size_t t = 0; t < rep; ++t) {
    detail::second_order_update(curr, prev, scratch, rule);
    std::swap(prev, curr);
  }
  if (rep % 2 == 1)
    for (std::size_t i = 0; i < prev.size(); ++i) std::swap(prev[i], curr[i]);
}

namespace detail {

inline void require_pair(const BitRow& a, const BitRow& b) {
  if (a.size() != b.size())
    throw DimensionError("reversible automaton rows differ in length: " +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  require_row(a.size());
}

}  // namespace detail

inline std::pair<BitRow, BitRow> second_order_evolve(BitRow prev, BitRow curr, Rule rule,
                                                     std::size_t rep) {
  detail::require_pair(prev, curr);
  BitRow scratch(prev.size());
  second_order_evolve_inplace(prev, curr, rule, rep, scratch);
  return {std::move(prev), std::move(curr)};
}

inline std::pair<BitRow, BitRow> second_order_reverse(BitRow prev_out, BitRow curr_out, Rule rule,
                                                      std::size_t rep) {
  detail::require_pair(prev_out, curr_out);
  BitRow scratch(prev_out.size());
  second_order_reverse_inplace(prev_out, curr_out, rule, rep, scratch);
  return {std::move(prev_out), std::move(curr_out)};
}

// Bit packing, most significant bit first.

inline BitRow unpack_bits(std::span<const std::uint8_t> bytes) {
  BitRow bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bytes.size(); ++i)
    for (int b = 0; b < 8; ++b) bits[i * 8 + b] = (bytes[i] >> (7 - b)) & 1u;
  return bits;
}

inline std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
  return bytes;
}

}  // namespace chaoscrypt
