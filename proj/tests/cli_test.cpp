#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "holdp/eval.hpp"
#include "holdp/features.hpp"
#include "holdp/image.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace holdp {
namespace {

using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(CliFilter, WritesEightPlanes) {
  TempDir dir;
  std::mt19937_64 rng(71);
  save_pgm(oracle::random_image(rng, 20, 20), dir / "in.pgm");
  const auto r = run({"filter", "-i", (dir / "in.pgm").string(), "-o", (dir / "planes").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (int d = 0; d < 8; ++d) {
    const GrayImage plane = load_image(dir / "planes" / ("plane_" + std::to_string(d) + ".pgm"));
    EXPECT_EQ(plane.width(), 64);
  }
}

TEST(CliFilter, ConstantImageIsMidGray) {
  TempDir dir;
  save_pgm(GrayImage(8, 8, 40.0), dir / "flat.pgm");
  ASSERT_EQ(run({"filter", "-i", (dir / "flat.pgm").string(), "-o", dir.path().string(),
                 "--resize", "none"})
                .code,
            0);
  for (int d = 0; d < 8; ++d) {
    const GrayImage plane = load_image(dir / ("plane_" + std::to_string(d) + ".pgm"));
    for (const double v : plane.pixels()) ASSERT_EQ(v, 128.0);
  }
}

TEST(CliFilter, MissingInputFails) {
  TempDir dir;
  const auto r = run({"filter", "-i", (dir / "nope.pgm").string(), "-o", dir.path().string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("nope.pgm"), std::string::npos);
}

TEST(CliPatternMap, WritesOneMapPerLayer) {
  TempDir dir;
  std::mt19937_64 rng(72);
  const GrayImage img = oracle::random_image(rng, 16, 16);
  save_pgm(img, dir / "in.pgm");
  ASSERT_EQ(run({"pattern-map", "-i", (dir / "in.pgm").string(), "-o", (dir / "maps").string(),
                 "--order", "3", "--adaptive", "--resize", "none"})
                .code,
            0);
  const auto maps = encode_pattern_maps(img, {3, ThresholdMode::AdaptiveMedian});
  for (int layer = 1; layer <= 3; ++layer) {
    const GrayImage m = load_image(dir / "maps" / ("layer_" + std::to_string(layer) + ".pgm"));
    for (std::size_t k = 0; k < m.size(); ++k) ASSERT_EQ(m.pixels()[k], maps[layer - 1].codes[k]);
  }
  ASSERT_EQ(run({"pattern-map", "-i", (dir / "in.pgm").string(), "-o", (dir / "ltp").string(),
                 "--descriptor", "ltp", "--tau", "3"})
                .code,
            0);
  EXPECT_TRUE(std::filesystem::exists(dir / "ltp" / "ltp_neg.pgm"));
}

TEST(CliPatternMap, TAndAdaptiveAreExclusive) {
  TempDir dir;
  save_pgm(GrayImage(8, 8), dir / "in.pgm");
  const auto r = run({"pattern-map", "-i", (dir / "in.pgm").string(), "-o", dir.path().string(),
                      "--t", "3", "--adaptive"});
  EXPECT_NE(r.code, 0);
}

class CliDataset : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto r = run({"synth", "--classes", "3", "--per-class", "4", "--size", "24", "--seed",
                        "5", "-o", (dir_ / "data").string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  std::string manifest() const { return (dir_ / "data" / "manifest.csv").string(); }

  TempDir dir_;
};

TEST_F(CliDataset, SynthIsDeterministic) {
  ASSERT_EQ(run({"synth", "--classes", "3", "--per-class", "4", "--size", "24", "--seed", "5",
                 "-o", (dir_ / "again").string()})
                .code,
            0);
  for (const auto& entry : std::filesystem::directory_iterator(dir_ / "data")) {
    EXPECT_EQ(testing::read_file(entry.path()),
              testing::read_file(dir_ / "again" / entry.path().filename()));
  }
  const auto m = load_manifest(manifest());
  EXPECT_EQ(m.entries.size(), 12u);
  EXPECT_EQ(m.subjects().size(), 3u);
}

TEST_F(CliDataset, ExtractWritesOneRecordPerEntry) {
  const auto out = dir_ / "f.bin";
  const auto r = run({"extract", "-m", manifest(), "-o", out.string(), "--order", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const FeatureSet set = load_features(out, DescriptorConfig::holdp(2, 3));
  ASSERT_EQ(set.records.size(), 12u);
  for (const auto& rec : set.records) EXPECT_EQ(rec.values.size(), 512u);
  EXPECT_EQ(set.records[0].label, "class0");

  ASSERT_EQ(run({"extract", "-m", manifest(), "-o", (dir_ / "g.bin").string(), "--order", "2",
                 "--threads", "3"})
                .code,
            0);
  EXPECT_EQ(testing::read_file(out), testing::read_file(dir_ / "g.bin"));

  ASSERT_EQ(run({"extract", "-m", manifest(), "-o", (dir_ / "f.csv").string(), "--descriptor",
                 "ltp", "--tau", "4"})
                .code,
            0);
  EXPECT_EQ(load_features(dir_ / "f.csv").records[3].values.size(), 512u);
}

TEST_F(CliDataset, ExtractSkipsUnreadableImages) {
  testing::write_file(dir_ / "m.csv",
                      "path,label\n" + (dir_ / "data" / "class0_0.pgm").string() + ",a\n" +
                          (dir_ / "missing.pgm").string() + ",b\n");
  const auto r = run({"extract", "-m", (dir_ / "m.csv").string(), "-o", (dir_ / "f.bin").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("1 skipped"), std::string::npos);
  EXPECT_EQ(load_features(dir_ / "f.bin").records.size(), 1u);
}

TEST_F(CliDataset, ExtractEmptyManifest) {
  testing::write_file(dir_ / "empty.csv", "path,label\n");
  const auto r =
      run({"extract", "-m", (dir_ / "empty.csv").string(), "-o", (dir_ / "e.bin").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(load_features(dir_ / "e.bin").records.empty());
}

TEST_F(CliDataset, ExtractValidatesBeforeWriting) {
  const auto out = dir_ / "never.bin";
  EXPECT_NE(run({"extract", "-m", manifest(), "-o", out.string(), "--t", "9"}).code, 0);
  EXPECT_NE(run({"extract", "-m", manifest(), "-o", out.string(), "--source", "min"}).code, 0);
  EXPECT_NE(run({"extract", "-m", manifest(), "-o", out.string(), "--resize", "64"}).code, 0);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST_F(CliDataset, BenchGridAndDeterminism) {
  const std::vector<std::string> base = {"bench", "-m", manifest(), "--orders", "1-2", "--t-list",
                                         "2,3", "--repeats", "2", "--seed", "9", "--baselines",
                                         "none"};
  auto args = base;
  args.insert(args.end(), {"--out-json", (dir_ / "a.json").string(), "--out-csv",
                           (dir_ / "a.csv").string()});
  ASSERT_EQ(run(args).code, 0);
  args = base;
  args.insert(args.end(), {"--out-json", (dir_ / "b.json").string()});
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(testing::read_file(dir_ / "a.json"), testing::read_file(dir_ / "b.json"));

  const auto doc = nlohmann::json::parse(testing::read_file(dir_ / "a.json"));
  EXPECT_EQ(doc["results"].size(), 6u);
  const std::string csv = testing::read_file(dir_ / "a.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "order,t=2,t=3,adaptive");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST_F(CliDataset, BenchInfeasibleSplitFails) {
  const auto r = run({"bench", "-m", manifest(), "--train-count", "4", "--out-json",
                      (dir_ / "x.json").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "x.json"));
}

TEST(CliSynth, UnwritableDirectory) {
  TempDir dir;
  testing::write_file(dir / "file", "x");
  EXPECT_NE(run({"synth", "-o", (dir / "file" / "sub").string()}).code, 0);
}

TEST(Cli, RequiresSubcommand) {
  EXPECT_NE(run({}).code, 0);
  EXPECT_EQ(run({"--help"}).code, 0);
}

}  // namespace
}  // namespace holdp
