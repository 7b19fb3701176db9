#pragma once

// Text format for HybridConfig:
//
//   # comment
//   variant = a
//   x1.omega = 10
//   x1.alpha = 2
//   x1.beta = 80
//   x1.base = logistic
//   x1.f = identity
//   x1.g = sin(rp)+2exp(rq)
//   x1.h = sin 2
//   ... (same seven keys for x2, y1, y2)
//
// Unary maps are written as `<name> [pre]`; `pre` is a number or `pi`.

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "chaoscrypt/chaos.hpp"
#include "chaoscrypt/error.hpp"

namespace chaoscrypt {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s == "pi") return std::numbers::pi;
  if (s == "-pi") return -std::numbers::pi;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("invalid number '" + std::string(s) + "' for " + std::string(what));
  return v;
}

/// Shortest text that parses back to exactly `v`.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

inline constexpr std::array<std::pair<UnaryFn, std::string_view>, 11> kUnaryNames{{
    {UnaryFn::zero, "zero"},
    {UnaryFn::identity, "identity"},
    {UnaryFn::sin, "sin"},
    {UnaryFn::cos, "cos"},
    {UnaryFn::tan, "tan"},
    {UnaryFn::cot, "cot"},
    {UnaryFn::sinh, "sinh"},
    {UnaryFn::cosh, "cosh"},
    {UnaryFn::coth, "coth"},
    {UnaryFn::exp, "exp"},
    {UnaryFn::log, "log"},
}};

}  // namespace detail

inline std::string_view to_string(UnaryFn fn) {
  for (const auto& [k, name] : detail::kUnaryNames)
    if (k == fn) return name;
  return "?";
}

inline std::string_view to_string(TransferFn fn) {
  for (const auto& [k, name] : kTransferNames)
    if (k == fn) return name;
  return "?";
}

inline std::string_view to_string(BaseMap b) {
  switch (b) {
    case BaseMap::logistic: return "logistic";
    case BaseMap::sine: return "sine";
    case BaseMap::tent: return "tent";
  }
  return "?";
}

inline BaseMap parse_base_map(std::string_view s) {
  s = detail::trim(s);
  if (s == "logistic") return BaseMap::logistic;
  if (s == "sine") return BaseMap::sine;
  if (s == "tent") return BaseMap::tent;
  throw ConfigError("unknown base map '" + std::string(s) + "'");
}

inline UnaryMap parse_unary_map(std::string_view s) {
  s = detail::trim(s);
  const auto sp = s.find_first_of(" \t");
  const std::string_view name = s.substr(0, sp);
  UnaryMap m;
  bool found = false;
  for (const auto& [k, n] : detail::kUnaryNames) {
    if (n == name) {
      m.fn = k;
      found = true;
    }
  }
  if (!found) throw ConfigError("unknown combination map '" + std::string(name) + "'");
  if (sp != std::string_view::npos) m.pre = detail::parse_double(s.substr(sp), name);
  return m;
}

inline TransferFn parse_transfer_map(std::string_view s) {
  s = detail::trim(s);
  for (const auto& [k, name] : kTransferNames)
    if (name == s) return k;
  throw ConfigError("unknown transfer map '" + std::string(s) + "'");
}

inline std::string to_string(const UnaryMap& m) {
  std::string out(to_string(m.fn));
  if (m.pre == std::numbers::pi) out += " pi";
  else if (m.pre != 1.0) out += " " + detail::format_double(m.pre);
  return out;
}

inline std::string serialize(const HybridConfig& cfg) {
  std::ostringstream os;
  os << "variant = " << (cfg.variant == HybridVariant::a ? "a" : "b") << "\n";
  const auto emit = [&os](const char* slot, const HybridBranch& b) {
    os << slot << ".omega = " << detail::format_double(b.omega) << "\n";
    os << slot << ".alpha = " << detail::format_double(b.alpha) << "\n";
    os << slot << ".beta = " << detail::format_double(b.beta) << "\n";
    os << slot << ".base = " << to_string(b.base) << "\n";
    os << slot << ".f = " << to_string(b.f) << "\n";
    os << slot << ".g = " << to_string(b.g) << "\n";
    os << slot << ".h = " << to_string(b.h) << "\n";
  };
  emit("x1", cfg.x[0]);
  emit("x2", cfg.x[1]);
  emit("y1", cfg.y[0]);
  emit("y2", cfg.y[1]);
  return os.str();
}

inline HybridConfig parse_hybrid_config(std::string_view text) {
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(detail::trim(line.substr(0, eq)));
    if (!kv.emplace(key, std::string(detail::trim(line.substr(eq + 1)))).second)
      throw ConfigError("config key '" + key + "' given twice");
  }

  const auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("config key '" + key + "' missing");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  HybridConfig cfg;
  const std::string variant = take("variant");
  if (variant == "a")
    cfg.variant = HybridVariant::a;
  else if (variant == "b")
    cfg.variant = HybridVariant::b;
  else
    throw ConfigError("variant must be 'a' or 'b', got '" + variant + "'");

  const auto branch = [&take](const std::string& slot) {
    HybridBranch b;
    b.omega = detail::parse_double(take(slot + ".omega"), slot + ".omega");
    b.alpha = detail::parse_double(take(slot + ".alpha"), slot + ".alpha");
    b.beta = detail::parse_double(take(slot + ".beta"), slot + ".beta");
    b.base = parse_base_map(take(slot + ".base"));
    b.f = parse_unary_map(take(slot + ".f"));
    b.g = parse_transfer_map(take(slot + ".g"));
    b.h = parse_unary_map(take(slot + ".h"));
    return b;
  };
  cfg.x[0] = branch("x1");
  cfg.x[1] = branch("x2");
  cfg.y[0] = branch("y1");
  cfg.y[1] = branch("y2");

  if (!kv.empty()) throw ConfigError("unknown config key '" + kv.begin()->first + "'");
  return cfg;
}

inline HybridConfig load_hybrid_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_hybrid_config(ss.str());
}

/// The three reference configurations (1, 2, 3). Case 3 is the default map
/// of the cipher and the steganography pipelines.
inline HybridConfig hybrid_case(int which) {
  constexpr double pi = std::numbers::pi;
  using U = UnaryMap;
  using F = UnaryFn;
  using T = TransferFn;
  constexpr auto L = BaseMap::logistic;
  constexpr auto S = BaseMap::sine;
  HybridConfig c;
  switch (which) {
    case 1:
      c.variant = HybridVariant::b;
      c.x[0] = {10, 2, 80, L, U{F::tan, 1}, T::exp_rp_plus_exp_rq, U{F::sin, 2}};
      c.x[1] = {20, 7, 20, L, U{F::sin, 1}, T::rp_plus_exp_pi_rq, U{F::sin, 4}};
      c.y[0] = {10, 2, 50, L, U{F::sin, 1}, T::tan_rq_plus_p, U{F::exp, 2}};
      c.y[1] = {20, 2, 30, L, U{F::identity, 1}, T::exp_20rq, U{F::cos, 4}};
      return c;
    case 2:
      c.variant = HybridVariant::b;
      c.x[0] = {1, 15, 26, L, U{F::cos, 1}, T::rp_plus_cos_rq, U{F::sin, 2}};
      c.x[1] = {10, 7, 2, S, U{F::cot, 1}, T::neg_rp_plus_log_pi_rq, U{F::exp, 4}};
      c.y[0] = {16, 2, 50, S, U{F::identity, 1}, T::tan_rq_plus_p, U{F::exp, 2}};
      c.y[1] = {20, 14, 30, L, U{F::sin, pi}, T::exp_20rq, U{F::cot, 4}};
      return c;
    case 3:
      c.variant = HybridVariant::a;
      c.x[0] = {10, 2, 80, L, U{F::identity, 1}, T::sin_rp_plus_2exp_rq, U{F::sin, 2}};
      c.x[1] = {5, 7, 20, S, U{F::coth, 1}, T::exp_20rq_plus_sin_pi_rq, U{F::cos, 4}};
      c.y[0] = {20, 2, 50, S, U{F::sin, 1}, T::p_tan_rq, U{F::sinh, 2}};
      c.y[1] = {30, 4, 3, L, U{F::identity, 1}, T::cos_rq, U{F::identity, 4}};
      return c;
    default:
      throw ConfigError("reference configuration must be 1, 2 or 3, got " +
                        std::to_string(which));
  }
}

/// All weights zero and every map the zero map: every step lands on (0, 0).
inline HybridConfig zero_config() { return HybridConfig{}; }

}  // namespace chaoscrypt
