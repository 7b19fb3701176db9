#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "chaoscrypt/chaoscrypt.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace chaoscrypt;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("chaoscrypt_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Exit status of the tool; stdout and stderr go to files in the temp dir.
  int run(const std::string& args) {
    const std::string cmd = std::string(CHAOSCRYPT_CLI) + " " + args + " >" + path("stdout.txt") + " 2>" +
                            path("stderr.txt");
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  std::string read(const std::string& name) const { return read_file_text(path(name)); }

  std::string make_key(const std::string& image) {
    EXPECT_EQ(run("keygen --image " + image + " --text hello --r1 1.19 --r2 0.97 --seed 7 --out " +
                  path("k.key")),
              0)
        << read("stderr.txt");
    return path("k.key");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EncryptDecryptContainer) {
  const std::string img = testsupport::data_path("chelsea_250.ppm");
  const std::string key = make_key(img);
  ASSERT_EQ(run("encrypt --image " + img + " --key " + key + " --out " + path("c.hcac")), 0) << read("stderr.txt");
  ASSERT_EQ(run("decrypt --image " + path("c.hcac") + " --key " + key + " --out " + path("p.ppm")), 0)
      << read("stderr.txt");
  EXPECT_EQ(read_file_bytes(path("p.ppm")), read_file_bytes(img));
  EXPECT_TRUE(fs::exists(path("c.hcac.manifest.json")));
  const auto m = nlohmann::json::parse(read("p.ppm.manifest.json"));
  EXPECT_EQ(m["command"], "decrypt");
  EXPECT_TRUE(m.contains("inputs"));
  EXPECT_TRUE(m.contains("outputs"));
}

TEST_F(Cli, EncryptDecryptBareImage) {
  std::mt19937_64 rng(91);
  save_image(testsupport::random_image(ImageKind::gray, 30, 30, rng), path("g.pgm"));
  const std::string key = make_key(path("g.pgm"));
  ASSERT_EQ(run("encrypt --image " + path("g.pgm") + " --key " + key + " --case 3 --out " + path("c.png")), 0);
  ASSERT_EQ(run("decrypt --image " + path("c.png") + " --key " + key + " --orig-size 30x30 --out " + path("p.pgm")),
            0)
      << read("stderr.txt");
  EXPECT_EQ(load_image(path("p.pgm")), load_image(path("g.pgm")));
}

TEST_F(Cli, AnalyzeIdentical) {
  const std::string img = testsupport::data_path("camera_80.pgm");
  ASSERT_EQ(run("analyze --a " + img + " --b " + img + " --report " + path("r.json")), 0) << read("stderr.txt");
  const auto j = nlohmann::json::parse(read("r.json"));
  EXPECT_EQ(j["mean_npcr"], 0.0);
  EXPECT_EQ(j["psnr"], "inf");
}

TEST_F(Cli, EmbedExtract) {
  const std::string cover = testsupport::data_path("chelsea_250.ppm");
  const std::string secret = testsupport::data_path("camera_80.pgm");
  const std::string key = make_key(cover);
  ASSERT_EQ(run("embed --cover " + cover + " --secret " + secret + " --key " + key + " --out " + path("s.png")), 0)
      << read("stderr.txt");
  ASSERT_TRUE(fs::exists(path("s.png.plan")));
  ASSERT_EQ(run("extract --stego " + path("s.png") + " --plan " + path("s.png.plan") + " --key " + key +
                " --out " + path("x.pgm")),
            0)
      << read("stderr.txt");
  EXPECT_GT(psnr(load_image(path("x.pgm")), load_image(secret)), 28.0);
}

TEST_F(Cli, ChaosLyapunov) {
  ASSERT_EQ(run("chaos lyapunov --case 3 --r 1.19 --n 5000 --out " + path("l.csv")), 0) << read("stderr.txt");
  std::istringstream in(read("l.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "r,lambda1,lambda2");
  const double l1 = std::stod(row.substr(row.find(',') + 1));
  EXPECT_GT(l1, 0.0);
  ASSERT_EQ(run("chaos histogram --case 1 --n 1000 --bins 10 --out " + path("h.csv")), 0);
  EXPECT_TRUE(fs::exists(path("h.csv.manifest.json")));
}

TEST_F(Cli, DemoShiftInverts) {
  std::mt19937_64 rng(92);
  save_image(testsupport::random_image(ImageKind::color, 9, 11, rng), path("a.ppm"));
  ASSERT_EQ(run("demo spiral-shift --image " + path("a.ppm") + " --amount 37 --kind 2 --out " + path("b.ppm")), 0);
  ASSERT_EQ(run("demo spiral-shift --image " + path("b.ppm") + " --amount 37 --kind 2 --inverse --out " +
                path("c.ppm")),
            0);
  EXPECT_NE(read_file_bytes(path("b.ppm")), read_file_bytes(path("a.ppm")));
  EXPECT_EQ(read_file_bytes(path("c.ppm")), read_file_bytes(path("a.ppm")));
}

TEST_F(Cli, ExitCodes) {
  const std::string img = testsupport::data_path("camera_80.pgm");
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("encrypt --image " + img), 1);
  EXPECT_EQ(run("keygen --image " + img + " --r1 1 --r2 1 --seed 1 --out " + path("k")), 1);  // no text

  std::ofstream(path("bad.key")) << "r1 1\nnonsense\n";
  EXPECT_EQ(run("encrypt --image " + img + " --key " + path("bad.key") + " --out " + path("c.hcac")), 2);
  EXPECT_FALSE(fs::exists(path("c.hcac")));

  const std::string key = make_key(img);
  std::ofstream(path("junk.hcac")) << "HCAC garbage";
  EXPECT_EQ(run("decrypt --image " + path("junk.hcac") + " --key " + key + " --out " + path("p.pgm")), 2);
  EXPECT_FALSE(fs::exists(path("p.pgm")));

  // secret larger than the cover
  EXPECT_EQ(run("embed --cover " + img + " --secret " + testsupport::data_path("camera_256.pgm") + " --key " + key +
                " --out " + path("s.png")),
            3);
  EXPECT_EQ(run("encrypt --image " + img + " --key " + key + " --case " + path("nope.cfg") + " --out " +
                path("c2.hcac")),
            3);
}
