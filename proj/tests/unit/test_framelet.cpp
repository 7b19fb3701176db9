#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chaoscrypt/framelet.hpp"

using namespace chaoscrypt;

namespace {

RealPlane random_real(std::size_t n, std::size_t m, std::mt19937_64& rng, double lo = 0.0, double hi = 255.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealPlane p(n, m);
  for (auto& v : p) v = u(rng);
  return p;
}

double max_abs_diff(const RealPlane& a, const RealPlane& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Direct 3x3 double loop: band(a,b)(i,j) = sum h_a[k] h_b[l] P(i+k-1, j+l-1), periodic.
RealPlane naive_band(const RealPlane& p, int a, int b) {
  const double s = std::sqrt(2.0) / 4.0;
  const double h[3][3] = {{0.25, 0.5, 0.25}, {s, 0.0, -s}, {-0.25, 0.5, -0.25}};
  const long n = static_cast<long>(p.rows()), m = static_cast<long>(p.cols());
  RealPlane out(p.rows(), p.cols());
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          acc += h[a][k] * h[b][l] * p(static_cast<std::size_t>((i + k - 1 + n) % n),
                                       static_cast<std::size_t>((j + l - 1 + m) % m));
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
    }
  return out;
}

}  // namespace

TEST(Framelet, ConstantPlane) {
  const RealPlane p(7, 9, 113.0);
  const auto c = framelet_forward(p);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (double v : c.bands[a][b]) EXPECT_NEAR(v, a == 0 && b == 0 ? 113.0 : 0.0, 1e-12);
  for (double v : get_ll(c)) EXPECT_NEAR(v, 113.0, 1e-12);
}

TEST(Framelet, ZeroPlane) {
  const auto c = framelet_forward(RealPlane(5, 5, 0.0));
  for (const auto& row : c.bands)
    for (const auto& band : row)
      for (double v : band) EXPECT_EQ(v, 0.0);
  for (double v : framelet_inverse(c)) EXPECT_EQ(v, 0.0);
}

TEST(Framelet, MatchesNaiveConvolution) {
  std::mt19937_64 rng(11);
  for (auto [n, m] : {std::pair{5, 5}, std::pair{4, 7}, std::pair{3, 3}}) {
    RealPlane p(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
    for (auto& v : p) v = static_cast<double>(rng() % 256);
    const auto c = framelet_forward(p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_LT(max_abs_diff(c.bands[a][b], naive_band(p, a, b)), 1e-12);
  }
}

TEST(Framelet, PerfectReconstruction) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const RealPlane p = random_real(16, 16, rng);
    EXPECT_LT(max_abs_diff(framelet_inverse(framelet_forward(p)), p), 1e-9);
  }
  const RealPlane odd = random_real(13, 29, rng);
  EXPECT_LT(max_abs_diff(framelet_inverse(framelet_forward(odd)), odd), 1e-9);
}

TEST(Framelet, Linearity) {
  std::mt19937_64 rng(13);
  const RealPlane p = random_real(10, 12, rng), q = random_real(10, 12, rng);
  RealPlane mix(10, 12);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.5 * p[i] - 0.75 * q[i];
  const auto cp = framelet_forward(p), cq = framelet_forward(q), cm = framelet_forward(mix);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (std::size_t i = 0; i < mix.size(); ++i)
        EXPECT_NEAR(cm.bands[a][b][i], 2.5 * cp.bands[a][b][i] - 0.75 * cq.bands[a][b][i], 1e-9);
}

TEST(Framelet, SetLlTouchesOnlyLl) {
  std::mt19937_64 rng(14);
  const auto c = framelet_forward(random_real(8, 8, rng));
  const RealPlane ll = random_real(8, 8, rng);
  const auto d = set_ll(c, ll);
  EXPECT_EQ(get_ll(d), ll);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a || b) {
        EXPECT_EQ(d.bands[a][b], c.bands[a][b]);
      }
  EXPECT_THROW(set_ll(c, RealPlane(8, 9)), DimensionError);
}

TEST(Framelet, SingleLlEditResidualBelowOne) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 10; ++t) {
    const auto c = framelet_forward(random_real(16, 16, rng));
    RealPlane ll = get_ll(c);
    ll(rng() % 16, rng() % 16) += 1.0;
    const auto back = get_ll(framelet_forward(framelet_inverse(set_ll(c, ll))));
    EXPECT_LT(max_abs_diff(back, ll), 1.0);
  }
}

TEST(Framelet, LowpassShortcut) {
  std::mt19937_64 rng(16);
  const RealPlane p = random_real(9, 11, rng);
  EXPECT_LT(max_abs_diff(lowpass_ll(p), get_ll(framelet_forward(p))), 1e-12);
}

TEST(Framelet, DimensionErrors) {
  EXPECT_THROW(framelet_forward(RealPlane(2, 5)), DimensionError);
  auto c = framelet_forward(RealPlane(4, 4, 1.0));
  c.bands[1][2] = RealPlane(4, 5);
  EXPECT_THROW(framelet_inverse(c), DimensionError);
}

TEST(Framelet, QuantizeRoundsHalfAwayAndClamps) {
  RealPlane p(1, 6);
  p[0] = 2.5;
  p[1] = 2.49;
  p[2] = -0.4;
  p[3] = -3.0;
  p[4] = 255.6;
  p[5] = 254.5;
  const Plane q = quantize_to_bytes(p);
  EXPECT_EQ(q[0], 3);
  EXPECT_EQ(q[1], 2);
  EXPECT_EQ(q[2], 0);
  EXPECT_EQ(q[3], 0);
  EXPECT_EQ(q[4], 255);
  EXPECT_EQ(q[5], 255);
}
