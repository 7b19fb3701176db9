#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "chaoscrypt/diagnostics.hpp"
#include "test_support.hpp"

using namespace chaoscrypt;

TEST(Lyapunov, LogisticAtFourIsLnTwo) {
  const auto l = lyapunov(Logistic1D{}, 0.1, 0.3, 4.0);
  EXPECT_NEAR(std::max(l.l1, l.l2), std::log(2.0), 0.05);
  EXPECT_NEAR(std::min(l.l1, l.l2), 0.0, 1e-6);  // y is carried unchanged
}

TEST(Lyapunov, StableLogistic) {
  const auto l = lyapunov(Logistic1D{}, 0.1, 0.3, 0.5);
  EXPECT_NEAR(std::min(l.l1, l.l2), std::log(0.5), 0.05);
  EXPECT_LE(std::max(l.l1, l.l2), 1e-6);
}

TEST(Lyapunov, HybridCaseThreeChaotic) {
  const auto l = lyapunov(HybridMap(hybrid_case(3)), 0.37, 0.62, 1.19);
  EXPECT_GT(l.l1, 0.0);
  EXPECT_GE(l.l1, l.l2);
}

TEST(Lyapunov, Errors) {
  EXPECT_THROW(lyapunov(Logistic1D{}, 1.5, 0.2, 3.0), DomainError);
  EXPECT_THROW(lyapunov(Logistic1D{}, 0.2, 0.2, 3.0, {0, 10, 1e-8}), ConfigError);
  // r = 5 throws the logistic orbit out of [0, 1]
  EXPECT_THROW(lyapunov(Logistic1D{}, 0.3, 0.2, 5.0), DomainError);
}

TEST(Bifurcation, PeriodTwo) {
  const auto pts = bifurcation_scan(Logistic1D{}, 0.2, 0.0, 3.2, 3.2, 1, 1000, 50);
  ASSERT_EQ(pts.size(), 50u);
  std::set<long> clusters;
  for (const auto& p : pts) clusters.insert(std::lround(p.x * 1e6));
  EXPECT_EQ(clusters.size(), 2u);
  // period-2 orbit of r x (1 - x): x = (r + 1 +- sqrt((r + 1)(r - 3))) / (2 r)
  const double r = 3.2, disc = std::sqrt((r + 1) * (r - 3));
  std::set<long> want{std::lround((r + 1 + disc) / (2 * r) * 1e6), std::lround((r + 1 - disc) / (2 * r) * 1e6)};
  EXPECT_EQ(clusters, want);
}

TEST(Bifurcation, DeterministicAndGrid) {
  const HybridMap m(hybrid_case(1));
  const auto a = bifurcation_scan(m, 0.3, 0.4, 0.5, 1.5, 5, 100, 10);
  const auto b = bifurcation_scan(m, 0.3, 0.4, 0.5, 1.5, 5, 100, 10);
  ASSERT_EQ(a.size(), 50u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
  EXPECT_EQ(a.front().r, 0.5);
  EXPECT_EQ(a.back().r, 1.5);
  EXPECT_THROW(bifurcation_scan(m, 0.3, 0.4, 2.0, 1.0, 5), ConfigError);
  EXPECT_THROW(bifurcation_scan(m, 0.3, 0.4, 0.5, 1.0, 0), ConfigError);
}

TEST(Histogram, Bins) {
  EXPECT_EQ(unit_histogram({0.0, 0.05, 0.5, 0.999}, 10), (std::vector<std::uint64_t>{2, 0, 0, 0, 0, 1, 0, 0, 0, 1}));
  EXPECT_THROW(unit_histogram({1.0}, 10), DomainError);
  EXPECT_THROW(unit_histogram({0.5}, 0), ConfigError);
}

TEST(Csv, Headers) {
  const ChaosMatrix m = sequence(HybridMap(hybrid_case(3)), 0.3, 0.4, 1.19, 20);
  const auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  const auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
  EXPECT_EQ(first_line(distribution_csv(m)), "i,x,y");
  EXPECT_EQ(lines(distribution_csv(m)), 21);
  EXPECT_EQ(first_line(histogram_csv(m, 4)), "bin_low,bin_high,count_x,count_y");
  EXPECT_EQ(lines(histogram_csv(m, 4)), 5);
  EXPECT_EQ(first_line(cobweb_csv(m)), "x_i,x_next,y_i,y_next");
  EXPECT_EQ(lines(cobweb_csv(m)), 20);
  const std::string ly = lyapunov_csv(Logistic1D{}, 0.1, 0.2, 3.9, 5.0, 2, {2000, 100, 1e-8});
  EXPECT_EQ(first_line(ly), "r,lambda1,lambda2");
  EXPECT_NE(ly.find("5,nan,nan"), std::string::npos);
  EXPECT_EQ(first_line(bifurcation_csv({{1.0, 0.5, 0.25}})), "r,x,y");
}
