#include "lhd/design_io.hpp"
#include "lhd/ledger.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace lhd {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lhd_io_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
  static inline int counter_ = 0;
};

Configuration reference_design_swapped() {
  return Configuration({3, 5}, {0, 1, 3,   //
                                1, 2, 1,   //
                                2, 0, 4,   //
                                3, 4, 2,   //
                                4, 3, 0});
}

TEST_F(IoTest, DesignRoundTripKeepsEverything) {
  const Configuration config = reference_design_swapped();
  nlohmann::json meta;
  meta["seed"] = 7;
  meta["mutation"] = "1dmove";
  save_design(file("design.json"), config, 6, meta);

  const LoadedDesign loaded = load_design(file("design.json"));
  EXPECT_EQ(loaded.config, config);
  EXPECT_EQ(loaded.dmin_sq, 6);
  EXPECT_EQ(loaded.meta.at("seed").get<int>(), 7);
  EXPECT_EQ(loaded.meta.at("mutation").get<std::string>(), "1dmove");
}

TEST_F(IoTest, DesignWithoutMetaLoadsWithNullMeta) {
  save_design(file("plain.json"), reference_design_swapped(), 6);
  EXPECT_TRUE(load_design(file("plain.json")).meta.is_null());
}

TEST_F(IoTest, LoaderRejectsMissingFileAndBadJson) {
  EXPECT_THROW(load_design(file("absent.json")), DesignIoError);
  std::ofstream(file("broken.json")) << "{not json";
  EXPECT_THROW(load_design(file("broken.json")), DesignIoError);
}

TEST_F(IoTest, LoaderRejectsNonLatinCoordinates) {
  save_design(file("tampered.json"), reference_design_swapped(), 6);
  nlohmann::json doc;
  std::ifstream(file("tampered.json")) >> doc;
  doc["coords"][0][0] = 1;  // duplicates point p1's first coordinate
  std::ofstream(file("tampered.json")) << doc.dump();
  EXPECT_THROW(load_design(file("tampered.json")), DesignIoError);
}

TEST_F(IoTest, LoaderRejectsWrongClaimedMinimum) {
  save_design(file("wrongclaim.json"), reference_design_swapped(), 6);
  nlohmann::json doc;
  std::ifstream(file("wrongclaim.json")) >> doc;
  doc["dmin_sq"] = 7;
  std::ofstream(file("wrongclaim.json")) << doc.dump();
  EXPECT_THROW(load_design(file("wrongclaim.json")), DesignIoError);
}

TEST_F(IoTest, LoaderRejectsShapeMismatches) {
  nlohmann::json doc;
  doc["k"] = 2;
  doc["n"] = 3;
  doc["coords"] = {{0, 0}, {1, 1}};  // only 2 rows
  doc["dmin_sq"] = 1;
  std::ofstream(file("shape.json")) << doc.dump();
  EXPECT_THROW(load_design(file("shape.json")), DesignIoError);
}

TEST_F(IoTest, LedgerStartsEmptyAndRoundTrips) {
  const HighscoreLedger empty = HighscoreLedger::load(file("ledger.json"));
  EXPECT_TRUE(empty.entries().empty());

  save_design(file("d1.json"), reference_design_swapped(), 6);
  HighscoreLedger ledger = HighscoreLedger::load(file("ledger.json"));
  LedgerEntry entry;
  entry.dmin_sq = 6;
  entry.design_path = file("d1.json").string();
  entry.seed = 3;
  entry.timestamp = "2026-08-22T00:00:00Z";
  EXPECT_TRUE(ledger.offer({3, 5}, entry));
  ledger.save();

  const HighscoreLedger reloaded = HighscoreLedger::load(file("ledger.json"));
  const auto found = reloaded.lookup({3, 5});
  ASSERT_TRUE(found.has_value());
  EXPECT_EQ(found->dmin_sq, 6);
  EXPECT_EQ(found->design_path, file("d1.json").string());
  EXPECT_EQ(found->seed, 3u);
  EXPECT_FALSE(fs::exists(file("ledger.json.tmp")));
  EXPECT_FALSE(reloaded.lookup({8, 20}).has_value());
}

TEST_F(IoTest, LedgerOnlyImprovesStrictly) {
  save_design(file("d6.json"), reference_design_swapped(), 6);
  HighscoreLedger ledger(file("ledger.json"));
  LedgerEntry entry;
  entry.dmin_sq = 6;
  entry.design_path = file("d6.json").string();
  EXPECT_TRUE(ledger.offer({3, 5}, entry));
  EXPECT_FALSE(ledger.offer({3, 5}, entry));  // equal score

  LedgerEntry worse = entry;
  worse.dmin_sq = 5;
  EXPECT_FALSE(ledger.offer({3, 5}, worse));
  EXPECT_EQ(ledger.lookup({3, 5})->dmin_sq, 6);
}

TEST_F(IoTest, LedgerRejectsCandidatesWhoseFileDoesNotVerify) {
  HighscoreLedger ledger(file("ledger.json"));

  LedgerEntry ghost;
  ghost.dmin_sq = 10;
  ghost.design_path = file("missing.json").string();
  EXPECT_THROW(ledger.offer({3, 5}, ghost), DesignIoError);

  // File verifies internally but scores 6, not the claimed 10.
  save_design(file("d6.json"), reference_design_swapped(), 6);
  LedgerEntry inflated;
  inflated.dmin_sq = 10;
  inflated.design_path = file("d6.json").string();
  EXPECT_FALSE(ledger.offer({3, 5}, inflated));

  // Wrong instance for the key being offered.
  LedgerEntry misfiled;
  misfiled.dmin_sq = 6;
  misfiled.design_path = file("d6.json").string();
  EXPECT_FALSE(ledger.offer({8, 20}, misfiled));
  EXPECT_TRUE(ledger.entries().empty());
}

TEST_F(IoTest, MalformedLedgerIsAnError) {
  std::ofstream(file("ledger.json")) << "{\"3/5\": {\"dmin_sq\": \"not a number\"}}";
  EXPECT_THROW(HighscoreLedger::load(file("ledger.json")), DesignIoError);
}

TEST_F(IoTest, LedgerKeyFormat) {
  EXPECT_EQ(HighscoreLedger::key_for({8, 20}), "8/20");
}

}  // namespace
}  // namespace lhd
