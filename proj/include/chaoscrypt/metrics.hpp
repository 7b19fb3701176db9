#pragma once

// Security and quality metrics: differential (NPCR/UACI), entropy,
// histogram chi-square, adjacent-pixel correlation and PSNR.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "chaoscrypt/error.hpp"
#include "chaoscrypt/image.hpp"

namespace chaoscrypt {

using Histogram = std::array<std::uint64_t, 256>;

inline Histogram histogram(const Plane& p) {
  Histogram h{};
  for (auto v : p) ++h[v];
  return h;
}

/// Shannon entropy in bits of the 256-level histogram.
inline double entropy(const Plane& p) {
  if (p.empty()) throw DimensionError("entropy of an empty plane");
  const Histogram h = histogram(p);
  const double n = static_cast<double>(p.size());
  double e = 0.0;
  for (auto c : h)
    if (c) {
      const double q = static_cast<double>(c) / n;
      e -= q * std::log2(q);
    }
  return e;
}

/// Chi-square statistic of the histogram against a uniform distribution.
inline double chi_square(const Plane& p) {
  if (p.empty()) throw DimensionError("chi-square of an empty plane");
  const Histogram h = histogram(p);
  const double expected = static_cast<double>(p.size()) / 256.0;
  double chi = 0.0;
  for (auto c : h) {
    const double d = static_cast<double>(c) - expected;
    chi += d * d / expected;
  }
  return chi;
}

/// Upper 1% point of chi-square with 255 degrees of freedom.
inline constexpr double kChiSquare255Critical = 310.457;

struct DiffStats {
  std::vector<double> npcr;  // percent, per plane
  std::vector<double> uaci;  // percent, per plane
  double mean_npcr = 0.0;
  double mean_uaci = 0.0;
};

inline DiffStats npcr_uaci(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw DimensionError("NPCR/UACI needs two images of the same shape");
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("NPCR/UACI of an empty image");
  const double peak = a.kind() == ImageKind::binary ? 1.0 : 255.0;
  DiffStats s;
  for (std::size_t k = 0; k < a.channels(); ++k) {
    const Plane& p = a.plane(k);
    const Plane& q = b.plane(k);
    std::size_t changed = 0;
    double intensity = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      changed += p[i] != q[i];
      intensity += std::abs(static_cast<double>(p[i]) - static_cast<double>(q[i])) / peak;
    }
    const double n = static_cast<double>(p.size());
    s.npcr.push_back(100.0 * static_cast<double>(changed) / n);
    s.uaci.push_back(100.0 * intensity / n);
  }
  for (std::size_t k = 0; k < s.npcr.size(); ++k) {
    s.mean_npcr += s.npcr[k] / static_cast<double>(s.npcr.size());
    s.mean_uaci += s.uaci[k] / static_cast<double>(s.uaci.size());
  }
  return s;
}

enum class Adjacency { horizontal, vertical, diagonal, anti_diagonal };

inline constexpr std::array<Adjacency, 4> kAdjacencies{Adjacency::horizontal, Adjacency::vertical,
                                                      Adjacency::diagonal, Adjacency::anti_diagonal};

inline std::string_view to_string(Adjacency a) {
  switch (a) {
    case Adjacency::horizontal: return "horizontal";
    case Adjacency::vertical: return "vertical";
    case Adjacency::diagonal: return "diagonal";
    case Adjacency::anti_diagonal: return "anti_diagonal";
  }
  return "?";
}

inline double pearson(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size() || u.size() < 2) throw DimensionError("correlation needs two equal samples of size >= 2");
  const double n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double cov = 0.0, vu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cov += (u[i] - mu) * (v[i] - mv);
    vu += (u[i] - mu) * (u[i] - mu);
    vv += (v[i] - mv) * (v[i] - mv);
  }
  if (vu == 0.0 || vv == 0.0) throw DomainError("correlation undefined: a sample has zero variance");
  return cov / std::sqrt(vu * vv);
}

/// Correlation of `pairs` randomly sampled neighbour pairs. `pairs` = 0 uses
/// every pair in the plane.
inline double correlation(const Plane& p, Adjacency dir, std::size_t pairs, std::uint64_t seed) {
  if (p.rows() < 2 || p.cols() < 2) throw DimensionError("correlation needs at least a 2x2 plane");
  int dr = 0, dc = 0, c0 = 0;
  switch (dir) {
    case Adjacency::horizontal: dc = 1; break;
    case Adjacency::vertical: dr = 1; break;
    case Adjacency::diagonal: dr = 1; dc = 1; break;
    case Adjacency::anti_diagonal: dr = 1; dc = -1; c0 = 1; break;
  }
  const std::size_t rows = p.rows() - static_cast<std::size_t>(dr);
  const std::size_t cols = p.cols() - static_cast<std::size_t>(dc != 0);
  std::vector<double> u, v;
  const auto take = [&](std::size_t r, std::size_t c) {
    const std::size_t cc = c + static_cast<std::size_t>(c0);
    u.push_back(p(r, cc));
    v.push_back(p(r + static_cast<std::size_t>(dr), static_cast<std::size_t>(static_cast<long>(cc) + dc)));
  };
  if (pairs == 0) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) take(r, c);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> rd(0, rows - 1), cd(0, cols - 1);
    for (std::size_t i = 0; i < pairs; ++i) {
      const std::size_t r = rd(rng);
      take(r, cd(rng));
    }
  }
  return pearson(u, v);
}

/// Peak signal-to-noise ratio in dB over all samples; +inf for identical
/// images.
inline double psnr(const Image& a, const Image& b, double peak = 255.0) {
  if (!a.same_shape(b)) throw DimensionError("PSNR needs two images of the same shape");
  double se = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.channels(); ++k)
    for (std::size_t i = 0; i < a.plane(k).size(); ++i) {
      const double d = static_cast<double>(a.plane(k)[i]) - static_cast<double>(b.plane(k)[i]);
      se += d * d;
      ++n;
    }
  if (n == 0) throw DimensionError("PSNR of empty images");
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / (se / static_cast<double>(n)));
}

inline double psnr(const Plane& a, const Plane& b, double peak = 255.0) {
  return psnr(Image(ImageKind::gray, {a}), Image(ImageKind::gray, {b}), peak);
}

struct PlaneReport {
  double entropy = 0.0;
  double chi_square = 0.0;
  std::array<std::optional<double>, 4> correlation{};  // empty when undefined
};

struct MetricsReport {
  std::vector<PlaneReport> planes;
  std::optional<DiffStats> diff;
  std::optional<double> psnr;
};

/// Per-plane statistics of one image, with optional comparison against a
/// reference of the same shape (NPCR/UACI and PSNR).
inline MetricsReport analyze(const Image& img, const Image* reference = nullptr,
                             std::size_t pairs = 10000, std::uint64_t seed = 1) {
  MetricsReport r;
  for (const auto& p : img.planes()) {
    PlaneReport pr;
    pr.entropy = entropy(p);
    pr.chi_square = chi_square(p);
    for (std::size_t d = 0; d < 4; ++d) {
      try {
        pr.correlation[d] = correlation(p, kAdjacencies[d], pairs, seed + d);
      } catch (const DomainError&) {
      }
    }
    r.planes.push_back(pr);
  }
  if (reference) {
    r.diff = npcr_uaci(img, *reference);
    r.psnr = psnr(img, *reference);
  }
  return r;
}

inline nlohmann::json to_json(const MetricsReport& r) {
  using nlohmann::json;
  json j;
  j["planes"] = json::array();
  for (const auto& p : r.planes) {
    json jp;
    jp["entropy"] = p.entropy;
    jp["chi_square"] = p.chi_square;
    json corr;
    for (std::size_t d = 0; d < 4; ++d)
      corr[std::string(to_string(kAdjacencies[d]))] =
          p.correlation[d] ? json(*p.correlation[d]) : json(nullptr);
    jp["correlation"] = corr;
    j["planes"].push_back(jp);
  }
  if (r.diff) {
    j["npcr"] = r.diff->npcr;
    j["uaci"] = r.diff->uaci;
    j["mean_npcr"] = r.diff->mean_npcr;
    j["mean_uaci"] = r.diff->mean_uaci;
  }
  if (r.psnr) j["psnr"] = std::isfinite(*r.psnr) ? json(*r.psnr) : json("inf");
  return j;
}

}  // namespace chaoscrypt
