#include <gtest/gtest.h>

#include <png.h>

#include <filesystem>
#include <random>

#include "chaoscrypt/imageio.hpp"
#include "test_support.hpp"

using namespace chaoscrypt;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

// 16-bit grayscale PNG written with libpng directly.
std::vector<std::uint8_t> png16(png_uint_32 w, png_uint_32 h) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_set_write_fn(
      png, &out,
      [](png_structp p, png_bytep d, png_size_t n) {
        auto* v = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(p));
        v->insert(v->end(), d, d + n);
      },
      nullptr);
  png_set_IHDR(png, info, w, h, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<std::uint8_t> row(2 * w, 0x12);
  for (png_uint_32 i = 0; i < h; ++i) png_write_row(png, row.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("chaoscrypt_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::filesystem::path dir_;
};

}  // namespace

TEST(Anymap, HandWrittenPlain) {
  const Image g = decode_image(bytes_of("P2\n# comment\n3 2\n255\n0 1 2\n250 251 255\n"));
  ASSERT_EQ(g.kind(), ImageKind::gray);
  EXPECT_EQ(g.rows(), 2u);
  EXPECT_EQ(g.at(1, 2), 255);
  const Image b = decode_image(bytes_of("P1\n4 2\n0101\n1 1 0 0\n"));
  ASSERT_EQ(b.kind(), ImageKind::binary);
  EXPECT_EQ(b.at(0, 1), 1);
  EXPECT_EQ(b.at(1, 3), 0);
  const Image c = decode_image(bytes_of("P3 1 1 255 10 20 30"));
  EXPECT_EQ(c.at(0, 0, 2), 30);
}

TEST(Anymap, RawBitmapPacking) {
  Image b(ImageKind::binary, 2, 10);
  b.at(0, 0) = 1;
  b.at(1, 9) = 1;
  const auto raw = encode_image(b, ImageFormat::pbm);
  const std::string header = "P4\n10 2\n";
  ASSERT_EQ(raw.size(), header.size() + 4);
  EXPECT_EQ(raw[header.size()], 0x80);
  EXPECT_EQ(raw[header.size() + 3], 0x40);
  EXPECT_EQ(decode_image(raw), b);
}

TEST(Anymap, RoundTrips) {
  std::mt19937_64 rng(81);
  for (auto kind : {ImageKind::binary, ImageKind::gray, ImageKind::color})
    for (bool plain : {false, true})
      for (auto [r, c] : {std::pair<std::size_t, std::size_t>{1, 1}, {5, 13}, {16, 9}}) {
        const Image img = testsupport::random_image(kind, r, c, rng);
        const ImageFormat f = kind == ImageKind::binary ? ImageFormat::pbm
                              : kind == ImageKind::gray ? ImageFormat::pgm
                                                        : ImageFormat::ppm;
        EXPECT_EQ(decode_image(encode_image(img, f, {plain})), img);
      }
}

TEST(Anymap, Errors) {
  EXPECT_THROW(decode_image(bytes_of("P7\n1 1\n")), FormatError);
  EXPECT_THROW(decode_image(bytes_of("P5\n2 2\n255\n\x01\x02")), FormatError);
  EXPECT_THROW(decode_image(bytes_of("P2\n2 1\n65535\n1 2\n")), FormatError);
  EXPECT_THROW(decode_image(bytes_of("P2\n2 1\n100\n1 200\n")), FormatError);
  EXPECT_THROW(decode_image(bytes_of("P2\n0 1\n255\n")), FormatError);
  EXPECT_THROW(decode_image(bytes_of("P1\n2 1\n0 2\n")), FormatError);
  EXPECT_THROW(decode_image(bytes_of("P6\n2")), FormatError);
  EXPECT_THROW(encode_image(Image(ImageKind::gray, 2, 2), ImageFormat::ppm), FormatError);
  EXPECT_THROW(encode_image(Image(ImageKind::color, 2, 2), ImageFormat::pbm), FormatError);
}

TEST(Png, RoundTrips) {
  std::mt19937_64 rng(82);
  for (auto kind : {ImageKind::binary, ImageKind::gray, ImageKind::color}) {
    const Image img = testsupport::random_image(kind, 17, 23, rng);
    const Image back = decode_image(encode_image(img, ImageFormat::png));
    EXPECT_EQ(back, img) << to_string(kind);
  }
}

TEST(Png, Rejects) {
  EXPECT_THROW(decode_image(png16(4, 4)), FormatError);
  auto good = encode_image(Image(ImageKind::gray, 30, 30), ImageFormat::png);
  good.resize(good.size() / 2);
  EXPECT_THROW(decode_image(good), FormatError);
  std::vector<std::uint8_t> sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n', 0, 0};
  EXPECT_THROW(decode_image(sig), FormatError);
}

TEST_F(TempDir, SaveLoadByExtension) {
  std::mt19937_64 rng(83);
  const Image c = testsupport::random_image(ImageKind::color, 6, 7, rng);
  save_image(c, path("a.ppm"));
  save_image(c, path("a.PNG"));
  save_image(c, path("plain.ppm"), {true});
  EXPECT_EQ(load_image(path("a.ppm")), c);
  EXPECT_EQ(load_image(path("a.PNG")), c);
  EXPECT_EQ(load_image(path("plain.ppm")), c);
  EXPECT_THROW(save_image(c, path("a.bmp")), FormatError);
  EXPECT_THROW(load_image(path("missing.ppm")), FormatError);
  EXPECT_FALSE(std::filesystem::exists(path("a.bmp")));
}

TEST(Planes, SplitMerge) {
  std::mt19937_64 rng(84);
  const Image c = testsupport::random_image(ImageKind::color, 5, 5, rng);
  EXPECT_EQ(merge_planes(split_planes(c)), c);
  EXPECT_THROW(split_planes(Image(ImageKind::gray, 2, 2)), DimensionError);
  EXPECT_THROW(merge_planes({Plane(2, 2), Plane(2, 2)}), DimensionError);
  EXPECT_THROW(merge_planes({Plane(2, 2), Plane(2, 2), Plane(2, 3)}), DimensionError);
  EXPECT_THROW(Image(ImageKind::binary, {Plane(1, 1, 2)}), FormatError);
}

TEST(Planes, PadAndCrop) {
  Plane p(2, 2);
  p(0, 0) = 1;
  p(0, 1) = 2;
  p(1, 0) = 3;
  p(1, 1) = 4;
  const Plane q = pad_replicate(p, 3, 4);
  EXPECT_EQ(q(2, 3), 4);
  EXPECT_EQ(q(0, 3), 2);
  EXPECT_EQ(q(2, 0), 3);
  EXPECT_EQ(crop(q, 2, 2), p);
  EXPECT_THROW(pad_replicate(p, 1, 4), DimensionError);
  EXPECT_THROW(crop(p, 3, 1), DimensionError);
}
