#pragma once

// One-dimensional base maps, the 2D Logistic and 2D SLMM reference systems,
// and the configurable 2D hybrid map built from weighted combinations of
// base, combination and transfer maps.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include "chaoscrypt/error.hpp"

namespace chaoscrypt {

struct ChaosState {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const ChaosState&, const ChaosState&) = default;
};

/// Mathematical mod 1 into [0, 1), also for negative inputs.
inline double mod1(double v) noexcept {
  double f = v - std::floor(v);
  return f >= 1.0 ? 0.0 : f;
}

enum class BaseMap { logistic, sine, tent };

inline double base_map(BaseMap kind, double r, double x) {
  switch (kind) {
    case BaseMap::logistic:
      return r * x * (1.0 - x);
    case BaseMap::sine:
      return r * std::sin(std::numbers::pi * x) / 4.0;
    case BaseMap::tent:
      return x < 0.5 ? r * x / 2.0 : r * (1.0 - x) / 2.0;
  }
  throw ConfigError("unknown base map kind");
}

// ---------------------------------------------------------------------------
// Reference 2D systems

/// 2D Logistic map; the y update uses the already-updated x.
struct Logistic2D {
  ChaosState operator()(ChaosState s, double r) const noexcept {
    const double x = r * (3.0 * s.y + 1.0) * s.x * (1.0 - s.x);
    const double y = r * (3.0 * x + 1.0) * s.y * (1.0 - s.y);
    return {x, y};
  }
};

inline ChaosState logistic2d_step(double r, ChaosState s) noexcept { return Logistic2D{}(s, r); }

inline ChaosState slmm_step(double alpha, double beta, ChaosState s) noexcept {
  const double x = alpha * (std::sin(std::numbers::pi * s.y) + beta) * s.x * (1.0 - s.x);
  const double y = alpha * (std::sin(std::numbers::pi * x) + beta) * s.y * (1.0 - s.y);
  return {x, y};
}

/// 2D Sine Logistic modulation map with the control parameter playing alpha.
struct Slmm {
  double beta = 3.0;
  ChaosState operator()(ChaosState s, double r) const noexcept { return slmm_step(r, beta, s); }
};

/// Classic logistic map on x with y held fixed; a degenerate 2D system used
/// as a reference for the diagnostics.
struct Logistic1D {
  ChaosState operator()(ChaosState s, double r) const noexcept {
    return {base_map(BaseMap::logistic, r, s.x), s.y};
  }
};

// ---------------------------------------------------------------------------
// Hybrid map catalog

enum class UnaryFn { zero, identity, sin, cos, tan, cot, sinh, cosh, coth, exp, log };

/// Combination map p -> fn(pre * p). Non-finite results are replaced by 0.
struct UnaryMap {
  UnaryFn fn = UnaryFn::identity;
  double pre = 1.0;

  double operator()(double p) const noexcept {
    const double a = pre * p;
    double v = 0.0;
    switch (fn) {
      case UnaryFn::zero: v = 0.0; break;
      case UnaryFn::identity: v = a; break;
      case UnaryFn::sin: v = std::sin(a); break;
      case UnaryFn::cos: v = std::cos(a); break;
      case UnaryFn::tan: v = std::tan(a); break;
      case UnaryFn::cot: v = 1.0 / std::tan(a); break;
      case UnaryFn::sinh: v = std::sinh(a); break;
      case UnaryFn::cosh: v = std::cosh(a); break;
      case UnaryFn::coth: v = 1.0 / std::tanh(a); break;
      case UnaryFn::exp: v = std::exp(a); break;
      case UnaryFn::log: v = std::log(a); break;
    }
    return std::isfinite(v) ? v : 0.0;
  }

  friend bool operator==(const UnaryMap&, const UnaryMap&) = default;
};

/// Transfer maps g(r, q, p). The catalog holds every expression used by the
/// three reference configurations.
enum class TransferFn {
  zero,
  exp_rp_plus_exp_rq,       // exp(rp) + exp(rq)
  rp_plus_exp_pi_rq,        // rp + 2/7 exp(pi rq)
  tan_rq_plus_p,            // tan(rq + p)
  exp_20rq,                 // exp(20 rq)
  rp_plus_cos_rq,           // rp + 12/15 cos(rq)
  neg_rp_plus_log_pi_rq,    // -rp + log(pi rq)
  sin_rp_plus_2exp_rq,      // sin(rp) + 2 exp(rq)
  exp_20rq_plus_sin_pi_rq,  // exp(20 rq) + sin(pi rq)
  p_tan_rq,                 // p tan(rq)
  cos_rq,                   // cos(rq)
};

inline constexpr std::array<std::pair<TransferFn, std::string_view>, 11> kTransferNames{{
    {TransferFn::zero, "0"},
    {TransferFn::exp_rp_plus_exp_rq, "exp(rp)+exp(rq)"},
    {TransferFn::rp_plus_exp_pi_rq, "rp+2/7*exp(pi*rq)"},
    {TransferFn::tan_rq_plus_p, "tan(rq+p)"},
    {TransferFn::exp_20rq, "exp(20rq)"},
    {TransferFn::rp_plus_cos_rq, "rp+12/15*cos(rq)"},
    {TransferFn::neg_rp_plus_log_pi_rq, "-rp+log(pi*rq)"},
    {TransferFn::sin_rp_plus_2exp_rq, "sin(rp)+2exp(rq)"},
    {TransferFn::exp_20rq_plus_sin_pi_rq, "exp(20rq)+sin(pi*rq)"},
    {TransferFn::p_tan_rq, "p*tan(rq)"},
    {TransferFn::cos_rq, "cos(rq)"},
}};

inline double transfer(TransferFn fn, double r, double q, double p) noexcept {
  constexpr double pi = std::numbers::pi;
  double v = 0.0;
  switch (fn) {
    case TransferFn::zero: v = 0.0; break;
    case TransferFn::exp_rp_plus_exp_rq: v = std::exp(r * p) + std::exp(r * q); break;
    case TransferFn::rp_plus_exp_pi_rq: v = r * p + 2.0 / 7.0 * std::exp(pi * r * q); break;
    case TransferFn::tan_rq_plus_p: v = std::tan(r * q + p); break;
    case TransferFn::exp_20rq: v = std::exp(20.0 * r * q); break;
    case TransferFn::rp_plus_cos_rq: v = r * p + 12.0 / 15.0 * std::cos(r * q); break;
    case TransferFn::neg_rp_plus_log_pi_rq: v = -r * p + std::log(pi * r * q); break;
    case TransferFn::sin_rp_plus_2exp_rq: v = std::sin(r * p) + 2.0 * std::exp(r * q); break;
    case TransferFn::exp_20rq_plus_sin_pi_rq:
      v = std::exp(20.0 * r * q) + std::sin(pi * r * q);
      break;
    case TransferFn::p_tan_rq: v = p * std::tan(r * q); break;
    case TransferFn::cos_rq: v = std::cos(r * q); break;
  }
  return std::isfinite(v) ? v : 0.0;
}

/// One branch of one axis: omega f(F(r, v)) + alpha g(r, q, p) + h(arg).
struct HybridBranch {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  BaseMap base = BaseMap::logistic;
  UnaryMap f{UnaryFn::zero, 1.0};
  TransferFn g = TransferFn::zero;
  UnaryMap h{UnaryFn::zero, 1.0};

  friend bool operator==(const HybridBranch&, const HybridBranch&) = default;
};

/// Algorithm a feeds x_i to the y update, algorithm b feeds x_{i+1}.
enum class HybridVariant { a, b };

struct HybridConfig {
  HybridVariant variant = HybridVariant::a;
  /// x[0] applies when y_i < 0.5, x[1] otherwise.
  std::array<HybridBranch, 2> x{};
  /// y[0] applies when zeta < 0.5, y[1] otherwise.
  std::array<HybridBranch, 2> y{};

  friend bool operator==(const HybridConfig&, const HybridConfig&) = default;
};

namespace detail {

inline double checked_term(double v, const char* axis, int branch, const char* slot) {
  if (!std::isfinite(v)) {
    const std::string name = std::string(axis) + std::to_string(branch + 1) + "." + slot;
    throw StepError(name, "hybrid map produced a non-finite value in " + name);
  }
  return v;
}

// v is the coordinate fed to the base map, (q, p) the transfer-map arguments
// and s the branch selector.
inline double branch_value(const HybridBranch& b, int index, const char* axis, double r, double v,
                           double q, double p, double s) {
  const double t1 = checked_term(b.omega * b.f(base_map(b.base, r, v)), axis, index, "f");
  const double t2 = checked_term(b.alpha * transfer(b.g, r, q, p), axis, index, "g");
  const double harg = index == 0 ? (b.beta - r) * s / 2.0 : (b.beta - r) * (1.0 - s) / 2.0;
  const double t3 = checked_term(b.h(harg), axis, index, "h");
  return checked_term(t1 + t2 + t3, axis, index, "sum");
}

}  // namespace detail

/// One step of the hybrid map, returning the unreduced sums before mod 1 in
/// `raw` when requested.
inline ChaosState hybrid_step(const HybridConfig& cfg, ChaosState s, double r,
                              ChaosState* raw = nullptr) {
  const int bx = s.y < 0.5 ? 0 : 1;
  const double xr = detail::branch_value(cfg.x[bx], bx, "x", r, s.x, s.x, s.y, s.x);
  const double xn = mod1(xr);
  const double zeta = cfg.variant == HybridVariant::a ? s.x : xn;
  const int by = zeta < 0.5 ? 0 : 1;
  const double yr = detail::branch_value(cfg.y[by], by, "y", r, s.y, zeta, s.y, zeta);
  if (raw) *raw = {xr, yr};
  return {xn, mod1(yr)};
}

class HybridMap {
 public:
  HybridMap() = default;
  explicit HybridMap(HybridConfig cfg) : cfg_(cfg) {}

  ChaosState operator()(ChaosState s, double r) const { return hybrid_step(cfg_, s, r); }
  const HybridConfig& config() const noexcept { return cfg_; }

 private:
  HybridConfig cfg_;
};

// ---------------------------------------------------------------------------
// Sequences

/// The 2 x n matrix of chaos outputs x_1..x_n (row 1) and y_1..y_n (row 2).
struct ChaosMatrix {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const noexcept { return x.size(); }
  friend bool operator==(const ChaosMatrix&, const ChaosMatrix&) = default;
};

/// Integer matrix of truncated chaos outputs.
struct DigitMatrix {
  std::vector<std::int64_t> x;
  std::vector<std::int64_t> y;

  std::size_t size() const noexcept { return x.size(); }
  friend bool operator==(const DigitMatrix&, const DigitMatrix&) = default;
};

template <class Map>
ChaosMatrix sequence(const Map& map, double x0, double y0, double r, std::size_t n) {
  if (n == 0) throw DimensionError("chaos sequence of length 0 requested");
  ChaosMatrix out;
  out.x.resize(n);
  out.y.resize(n);
  ChaosState s{x0, y0};
  for (std::size_t j = 0; j < n; ++j) {
    s = map(s, r);
    out.x[j] = s.x;
    out.y[j] = s.y;
  }
  return out;
}

inline constexpr int kMaxDigits = 18;

/// Leading `digits` decimals of v as an integer: floor(v * 10^digits).
inline std::int64_t truncate_digits(double v, int digits) {
  if (digits < 0 || digits > kMaxDigits)
    throw ConfigError("truncation digits must be in [0, 18], got " + std::to_string(digits));
  double scale = 1.0;
  for (int i = 0; i < digits; ++i) scale *= 10.0;
  return static_cast<std::int64_t>(std::floor(v * scale));
}

inline DigitMatrix truncate(const ChaosMatrix& m, int tau1, int tau2) {
  DigitMatrix out;
  out.x.reserve(m.size());
  out.y.reserve(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    out.x.push_back(truncate_digits(m.x[j], tau1));
    out.y.push_back(truncate_digits(m.y[j], tau2));
  }
  return out;
}

template <class Map>
DigitMatrix truncated_sequence(const Map& map, double x0, double y0, double r, std::size_t n,
                               int tau1, int tau2) {
  return truncate(sequence(map, x0, y0, r, n), tau1, tau2);
}

/// Seed tuple (x0, y0, r) for one chaos stream.
struct ChaosSeed {
  double x0 = 0.0;
  double y0 = 0.0;
  double r = 1.0;
};

/// Quantizes a chaos output in [0, 1) to a byte: floor(v * 256).
inline std::uint8_t quantize_byte(double v) noexcept {
  const double q = std::floor(v * 256.0);
  if (q <= 0.0) return 0;
  if (q >= 255.0) return 255;
  return static_cast<std::uint8_t>(q);
}

}  // namespace chaoscrypt
