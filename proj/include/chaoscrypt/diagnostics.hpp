#pragma once

// Dynamical diagnostics for 2D maps: Lyapunov spectrum, bifurcation scans and
// CSV exports of trajectories (distribution, histogram, cobweb).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "chaoscrypt/chaos.hpp"
#include "chaoscrypt/error.hpp"

namespace chaoscrypt {

struct LyapunovOptions {
  std::size_t iterations = 20000;
  std::size_t transient = 100;
  double epsilon = 1e-8;
};

struct LyapunovSpectrum {
  double l1 = 0.0;  // largest
  double l2 = 0.0;
};

namespace detail {

inline void require_in_domain(ChaosState s, std::size_t step) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || s.x < 0.0 || s.x > 1.0 || s.y < 0.0 || s.y > 1.0)
    throw DomainError("trajectory left [0, 1]^2 at step " + std::to_string(step));
}

// Difference of two mod-1 outputs taken on the torus.
inline double torus_diff(double a, double b) {
  const double d = a - b;
  return d - std::round(d);
}

}  // namespace detail

/// Both exponents from finite-difference Jacobians, re-orthonormalized by
/// Gram-Schmidt every step.
template <class Map>
LyapunovSpectrum lyapunov(const Map& map, double x0, double y0, double r, LyapunovOptions opt = {}) {
  if (opt.iterations == 0) throw ConfigError("Lyapunov estimate needs at least one iteration");
  ChaosState s{x0, y0};
  detail::require_in_domain(s, 0);
  for (std::size_t t = 0; t < opt.transient; ++t) {
    s = map(s, r);
    detail::require_in_domain(s, t + 1);
  }
  std::array<double, 2> e1{1.0, 0.0}, e2{0.0, 1.0};
  double sum1 = 0.0, sum2 = 0.0;
  const double h = opt.epsilon;
  for (std::size_t t = 0; t < opt.iterations; ++t) {
    const ChaosState f = map(s, r);
    const ChaosState fx = map(ChaosState{s.x + h, s.y}, r);
    const ChaosState fy = map(ChaosState{s.x, s.y + h}, r);
    const double j11 = detail::torus_diff(fx.x, f.x) / h, j21 = detail::torus_diff(fx.y, f.y) / h;
    const double j12 = detail::torus_diff(fy.x, f.x) / h, j22 = detail::torus_diff(fy.y, f.y) / h;
    std::array<double, 2> a{j11 * e1[0] + j12 * e1[1], j21 * e1[0] + j22 * e1[1]};
    std::array<double, 2> b{j11 * e2[0] + j12 * e2[1], j21 * e2[0] + j22 * e2[1]};
    const double na = std::hypot(a[0], a[1]);
    if (!(na > 0.0) || !std::isfinite(na)) throw DomainError("degenerate Jacobian at step " + std::to_string(t));
    e1 = {a[0] / na, a[1] / na};
    const double proj = b[0] * e1[0] + b[1] * e1[1];
    b = {b[0] - proj * e1[0], b[1] - proj * e1[1]};
    const double nb = std::hypot(b[0], b[1]);
    if (!std::isfinite(nb)) throw DomainError("non-finite Jacobian at step " + std::to_string(t));
    sum1 += std::log(na);
    sum2 += nb > 0.0 ? std::log(nb) : -745.0;
    if (nb > 0.0) e2 = {b[0] / nb, b[1] / nb};
    else e2 = {-e1[1], e1[0]};
    s = f;
    detail::require_in_domain(s, opt.transient + t + 1);
  }
  const double n = static_cast<double>(opt.iterations);
  return {sum1 / n, sum2 / n};
}

struct BifurcationPoint {
  double r = 0.0;
  double x = 0.0;
  double y = 0.0;
};

/// For each of `steps` parameters in [r_min, r_max], the `keep` states after
/// a transient.
template <class Map>
std::vector<BifurcationPoint> bifurcation_scan(const Map& map, double x0, double y0, double r_min,
                                               double r_max, std::size_t steps,
                                               std::size_t transient = 500, std::size_t keep = 100) {
  if (steps == 0 || keep == 0) throw ConfigError("bifurcation scan needs steps and keep > 0");
  if (!(r_max >= r_min)) throw ConfigError("bifurcation scan needs r_min <= r_max");
  std::vector<BifurcationPoint> out;
  out.reserve(steps * keep);
  for (std::size_t k = 0; k < steps; ++k) {
    const double r = steps == 1 ? r_min : r_min + (r_max - r_min) * static_cast<double>(k) /
                                                      static_cast<double>(steps - 1);
    ChaosState s{x0, y0};
    for (std::size_t t = 0; t < transient; ++t) s = map(s, r);
    for (std::size_t t = 0; t < keep; ++t) {
      s = map(s, r);
      out.push_back({r, s.x, s.y});
    }
  }
  return out;
}

/// Counts of values in `bins` equal bins over [0, 1).
inline std::vector<std::uint64_t> unit_histogram(const std::vector<double>& v, std::size_t bins) {
  if (bins == 0) throw ConfigError("histogram needs at least one bin");
  std::vector<std::uint64_t> h(bins, 0);
  for (double x : v) {
    if (!(x >= 0.0 && x < 1.0)) throw DomainError("histogram value outside [0, 1)");
    std::size_t b = static_cast<std::size_t>(x * static_cast<double>(bins));
    ++h[std::min(b, bins - 1)];
  }
  return h;
}

// CSV exporters

inline std::string distribution_csv(const ChaosMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "i,x,y\n";
  for (std::size_t i = 0; i < m.size(); ++i) os << i + 1 << ',' << m.x[i] << ',' << m.y[i] << '\n';
  return os.str();
}

inline std::string histogram_csv(const ChaosMatrix& m, std::size_t bins) {
  const auto hx = unit_histogram(m.x, bins);
  const auto hy = unit_histogram(m.y, bins);
  std::ostringstream os;
  os.precision(17);
  os << "bin_low,bin_high,count_x,count_y\n";
  for (std::size_t b = 0; b < bins; ++b)
    os << static_cast<double>(b) / static_cast<double>(bins) << ','
       << static_cast<double>(b + 1) / static_cast<double>(bins) << ',' << hx[b] << ',' << hy[b]
       << '\n';
  return os.str();
}

/// Successive pairs (x_i, x_{i+1}) and (y_i, y_{i+1}).
inline std::string cobweb_csv(const ChaosMatrix& m) {
  std::ostringstream os;
  os.precision(17);
  os << "x_i,x_next,y_i,y_next\n";
  for (std::size_t i = 0; i + 1 < m.size(); ++i)
    os << m.x[i] << ',' << m.x[i + 1] << ',' << m.y[i] << ',' << m.y[i + 1] << '\n';
  return os.str();
}

template <class Map>
std::string lyapunov_csv(const Map& map, double x0, double y0, double r_min, double r_max,
                         std::size_t steps, LyapunovOptions opt = {}) {
  std::ostringstream os;
  os.precision(17);
  os << "r,lambda1,lambda2\n";
  for (std::size_t k = 0; k < steps; ++k) {
    const double r = steps == 1 ? r_min : r_min + (r_max - r_min) * static_cast<double>(k) /
                                                      static_cast<double>(steps - 1);
    try {
      const auto l = lyapunov(map, x0, y0, r, opt);
      os << r << ',' << l.l1 << ',' << l.l2 << '\n';
    } catch (const DomainError&) {
      os << r << ",nan,nan\n";
    }
  }
  return os.str();
}

inline std::string bifurcation_csv(const std::vector<BifurcationPoint>& pts) {
  std::ostringstream os;
  os.precision(17);
  os << "r,x,y\n";
  for (const auto& p : pts) os << p.r << ',' << p.x << ',' << p.y << '\n';
  return os.str();
}

}  // namespace chaoscrypt
