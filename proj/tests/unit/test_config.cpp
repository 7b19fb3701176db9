#include <gtest/gtest.h>

#include <string>

#include "chaoscrypt/hybrid_config.hpp"
#include "test_support.hpp"

using namespace chaoscrypt;

namespace {

std::string cfg_path(int k) { return std::string(CHAOSCRYPT_CONFIG_DIR) + "/case" + std::to_string(k) + ".cfg"; }

}  // namespace

TEST(Config, ShippedFilesMatchBuiltins) {
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(load_hybrid_config(cfg_path(k)), hybrid_case(k)) << "case " << k;
}

TEST(Config, SerializeRoundTrip) {
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(parse_hybrid_config(serialize(hybrid_case(k))), hybrid_case(k));
  EXPECT_EQ(parse_hybrid_config(serialize(zero_config())), zero_config());
}

TEST(Config, PiPrefactorAndComments) {
  std::string s = serialize(hybrid_case(2));
  EXPECT_NE(s.find("y2.f = sin pi"), std::string::npos);
  s = "# leading comment\n\n" + s + "  # trailing\n";
  EXPECT_EQ(parse_hybrid_config(s), hybrid_case(2));
}

TEST(Config, Rejects) {
  const std::string good = serialize(hybrid_case(3));
  const auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_THROW(parse_hybrid_config(replace("variant = a", "variant = c")), ConfigError);
  EXPECT_THROW(parse_hybrid_config(replace("x1.omega = 10", "x1.omega = ten")), ConfigError);
  EXPECT_THROW(parse_hybrid_config(replace("x1.base = logistic", "x1.base = henon")), ConfigError);
  EXPECT_THROW(parse_hybrid_config(replace("x2.f = coth", "x2.f = sech")), ConfigError);
  EXPECT_THROW(parse_hybrid_config(replace("y1.g = p*tan(rq)", "y1.g = p*cot(rq)")), ConfigError);
  EXPECT_THROW(parse_hybrid_config(replace("y2.h = identity 4", "y2.h = identity four")), ConfigError);
  EXPECT_THROW(parse_hybrid_config(replace("x1.alpha = 2\n", "")), ConfigError);
  EXPECT_THROW(parse_hybrid_config(good + "x1.alpha = 3\n"), ConfigError);
  EXPECT_THROW(parse_hybrid_config(good + "z1.alpha = 3\n"), ConfigError);
  EXPECT_THROW(parse_hybrid_config(good + "no equals sign\n"), ConfigError);
  EXPECT_THROW(load_hybrid_config("/nonexistent/case.cfg"), ConfigError);
  EXPECT_THROW(hybrid_case(4), ConfigError);
}
