#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "chaoscrypt/keygen.hpp"
#include "test_support.hpp"

using namespace chaoscrypt;

namespace {

const HybridMap& case3() {
  static const HybridMap m(hybrid_case(3));
  return m;
}

KeySpace keys_for(const Image& img, std::uint64_t seed, const std::string& text = "a shared secret phrase") {
  std::mt19937_64 rng(seed);
  return generate_keys(img, text, 1.19, 0.97, rng);
}

Image sample_color() {
  std::mt19937_64 rng(41);
  return testsupport::random_image(ImageKind::color, 24, 20, rng);
}

// Straight per-plane fold: xi1[j] and xi2[i] XOR over planes of P ^ Psi, with
// Psi column 0 the scaled row sums and columns 1.. from pairs of rows.
std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> naive_folds(const Image& img, double r1) {
  const std::size_t n = img.rows() + img.rows() % 2, m = img.cols();
  std::vector<std::uint8_t> xi1(m, 0), xi2(n, 0);
  for (std::size_t k = 0; k < img.channels(); ++k) {
    std::vector<std::vector<int>> p(n, std::vector<int>(m));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) p[i][j] = img.at(std::min(i, img.rows() - 1), j, k);
    std::vector<double> col0(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (int v : p[i]) s += v;
      col0[i] = s / (256.0 * static_cast<double>(m));
    }
    for (std::size_t i = 0; i < n; i += 2) {
      const ChaosMatrix w = sequence(case3(), col0[i], col0[i + 1], r1, m);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t h = 0; h < 2; ++h) {
          const double psi = j == 0 ? col0[i + h] : (h == 0 ? w.x[j - 1] : w.y[j - 1]);
          const std::uint8_t u = static_cast<std::uint8_t>(p[i + h][j] ^ quantize_byte(psi));
          xi1[j] ^= u;
          xi2[i + h] ^= u;
        }
    }
  }
  return {xi1, xi2};
}

}  // namespace

TEST(Keygen, Deterministic) {
  const Image img = sample_color();
  EXPECT_EQ(keys_for(img, 5), keys_for(img, 5));
}

TEST(Keygen, NonceOnlyReachesSecondHalf) {
  const Image img = sample_color();
  const KeySpace a = keys_for(img, 5), b = keys_for(img, 6);
  EXPECT_EQ(a.x0_1, b.x0_1);
  EXPECT_EQ(a.y0_2, b.y0_2);
  EXPECT_NE(a.x0_2, b.x0_2);
  EXPECT_NE(a.y0_1, b.y0_1);
  EXPECT_NE(a.nonce.x, b.nonce.x);
}

TEST(Keygen, KeysInUnitInterval) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 50; ++t) {
    const Image img = testsupport::random_image(t % 2 ? ImageKind::gray : ImageKind::color, 8 + rng() % 20,
                                                3 + rng() % 20, rng);
    const KeySpace k = generate_keys(img, std::string_view("x"), 1.19, 0.8, rng);
    for (double v : {k.x0_1, k.y0_1, k.x0_2, k.y0_2}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
    EXPECT_GT(k.nonce.x, 0.0);
    EXPECT_LT(k.nonce.y, 1.0);
  }
}

TEST(Keygen, PixelBitFlipAvalanche) {
  const Image img = sample_color();
  const KeySpace base = keys_for(img, 5);
  std::mt19937_64 rng(43);
  int moved = 0;
  const int flips = 50;
  for (int t = 0; t < flips; ++t) {
    Image f = img;
    const std::size_t i = rng() % img.rows(), j = rng() % img.cols(), k = rng() % 3;
    f.at(i, j, k) ^= static_cast<std::uint8_t>(1u << (rng() % 8));
    const KeySpace kf = keys_for(f, 5);
    if (std::abs(kf.x0_1 - base.x0_1) > 1e-4) ++moved;
  }
  EXPECT_GE(moved, flips * 95 / 100);
}

TEST(Keygen, TextChangesSecondStageKeys) {
  const Image img = sample_color();
  const KeySpace a = keys_for(img, 5, "alpha"), b = keys_for(img, 5, "alphb");
  EXPECT_EQ(a.x0_1, b.x0_1);
  EXPECT_NE(a.y0_2, b.y0_2);
  EXPECT_NE(a.y0_1, b.y0_1);
}

TEST(Keygen, TraceMatchesNaiveFolds) {
  for (auto kind : {ImageKind::color, ImageKind::gray}) {
    std::mt19937_64 rng(44);
    const Image img = testsupport::random_image(kind, 11, 9, rng);  // odd rows
    KeyTrace tr;
    const std::string text = "trace";
    generate_keys(img, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()),
                  1.19, 0.9, rng, case3(), &tr);
    const auto [xi1, xi2] = naive_folds(img, 1.19);
    EXPECT_EQ(tr.xi1, xi1);
    EXPECT_EQ(tr.xi2, xi2);
    ASSERT_EQ(tr.text_vector.size(), 9u);
    ASSERT_EQ(tr.v3.size(), 9u);
    // popcount is unchanged by the segment rotation
    const BitRow bits = unpack_bits(tr.text_vector);
    for (std::size_t s = 0; s < 8; ++s) {
      std::size_t ones = 0;
      for (std::size_t b = 0; b < 9; ++b) ones += bits[s * 9 + b];
      EXPECT_DOUBLE_EQ(tr.delta[s], (ones + 1.0) / 11.0);
    }
  }
}

TEST(TextVector, ZeroTextGivesChaosBytes) {
  const std::vector<std::uint8_t> zeros(4, 0);
  const auto t = derive_text_vector(zeros, 0.3, 1.19, 10, case3());
  ASSERT_EQ(t.size(), 10u);
  const ChaosMatrix w = sequence(case3(), 0.3, 0.0, 1.19, 6);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(t[i], quantize_byte(i % 2 ? w.y[i / 2] : w.x[i / 2]));
}

TEST(TextVector, LongTextUsesBothCoordinates) {
  const std::vector<std::uint8_t> text{1, 2, 3, 4, 5, 6, 7};
  const auto t = derive_text_vector(text, 0.3, 1.19, 5, case3());
  const double y0 = (1 ^ 2 ^ 3 ^ 4 ^ 5 ^ 6 ^ 7) / 256.0;
  const ChaosMatrix w = sequence(case3(), 0.3, y0, 1.19, 5);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_EQ(t[i], text[i] ^ quantize_byte(w.x[i]) ^ quantize_byte(w.y[i]));
  EXPECT_THROW(derive_text_vector(text, 0.3, 1.19, 0, case3()), DimensionError);
}

TEST(Keygen, InputErrors) {
  const Image img = sample_color();
  std::mt19937_64 rng(1);
  EXPECT_THROW(generate_keys(img, std::string_view(""), 1.0, 1.0, rng), ConfigError);
  EXPECT_THROW(generate_keys(img, std::string_view("t"), 0.0, 1.0, rng), ConfigError);
  EXPECT_THROW(generate_keys(img, std::string_view("t"), 1.0, -2.0, rng), ConfigError);
  EXPECT_THROW(generate_keys(Image(ImageKind::gray, 8, 2), std::string_view("t"), 1.0, 1.0, rng), DimensionError);
}

TEST(KeyFile, RoundTripExact) {
  const KeySpace k = keys_for(sample_color(), 9);
  EXPECT_EQ(parse_key_space(serialize(k)), k);
  EXPECT_EQ(key_fingerprint(parse_key_space(serialize(k))), key_fingerprint(k));
}

TEST(KeyFile, CommentsAndEquals) {
  const KeySpace k = parse_key_space("# key\nr1 = 1.5\nr2 2\n\nx0_1 0.1\ny0_1 0.2\nx0_2 0.3\ny0_2 0.4\n");
  EXPECT_EQ(k.r1, 1.5);
  EXPECT_EQ(k.y0_2, 0.4);
  EXPECT_EQ(k.nonce.x, 0.0);
}

TEST(KeyFile, Rejects) {
  const std::string good = "r1 1\nr2 1\nx0_1 0.1\ny0_1 0.2\nx0_2 0.3\n";
  EXPECT_THROW(parse_key_space(good), FormatError);  // y0_2 missing
  EXPECT_THROW(parse_key_space(good + "y0_2 0.4\nbogus 1\n"), FormatError);
  EXPECT_THROW(parse_key_space(good + "y0_2 0.4\nr1 2\n"), FormatError);
  EXPECT_THROW(parse_key_space(good + "y0_2 1.0\n"), FormatError);
  EXPECT_THROW(parse_key_space(good + "y0_2 abc\n"), FormatError);
  EXPECT_THROW(parse_key_space(good + "y0_2\n"), FormatError);
  EXPECT_THROW(parse_key_space("r1 -1\nr2 1\nx0_1 0.1\ny0_1 0.2\nx0_2 0.3\ny0_2 0.4\n"), FormatError);
  EXPECT_NO_THROW(parse_key_space(good + "y0_2 0.4\n"));
}

TEST(KeyFile, FingerprintSensitive) {
  KeySpace a = testsupport::fixed_keys(), b = a;
  b.y0_2 = std::nextafter(b.y0_2, 1.0);
  EXPECT_NE(key_fingerprint(a), key_fingerprint(b));
}
