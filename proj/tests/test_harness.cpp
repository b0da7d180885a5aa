// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/harness.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace gcamusic {
namespace {

const std::vector<double> kSix{-0.7, -0.5, -0.3, 0.3, 0.5, 0.7};

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.thetas = kSix;
  c.trials = 4;
  c.snr_db_list = {0.0, 10.0};
  c.algorithms = {Algorithm::Gca, Algorithm::Avca, Algorithm::GMusic};
  c.seed = 99;
  return c;
}

DoaEstimate estimate_of(std::vector<double> thetas) {
  DoaEstimate e;
  e.thetas = std::move(thetas);
  return e;
}

TEST(Rmse, Examples) {
  const SourceSet truth({-0.2, 0.4});
  const std::vector<DoaEstimate> perfect(3, estimate_of({-0.2, 0.4}));
  EXPECT_EQ(rmse(truth, perfect), 0.0);

  const SourceSet one({0.1});
  const std::vector<DoaEstimate> off{estimate_of({0.1 + 0.02})};
  EXPECT_NEAR(rmse(one, off), 0.02, 1e-15);

  const SourceSet two({0.0, 0.5});
  const std::vector<DoaEstimate> errs{estimate_of({0.3, 0.9})};
  EXPECT_NEAR(rmse(two, errs), std::sqrt(0.125), 1e-15);
  EXPECT_NEAR(rmse(two, errs), 0.3535533905932738, 1e-15);

  const std::vector<DoaEstimate> wrong{estimate_of({0.1})};
  EXPECT_THROW(rmse(two, wrong), InvalidArgument);
  EXPECT_THROW(rmse(two, std::span<const DoaEstimate>{}), InvalidArgument);
}

TEST(GeometrySpec, BuildsAndNames) {
  EXPECT_EQ((GeometrySpec{GeometryKind::Nested2, 7}.build().aperture()), 14);
  EXPECT_EQ((GeometrySpec{GeometryKind::SuperNested2, 7}.build().aperture()), 14);
  EXPECT_EQ((GeometrySpec{GeometryKind::Mra, 7}.build().aperture()), 17);
  EXPECT_EQ((GeometrySpec{GeometryKind::Ula, 7}.build().aperture()), 6);
  EXPECT_EQ((GeometrySpec{GeometryKind::Nested2, 7, 3, 4}.build().aperture()), 15);
  EXPECT_EQ((GeometrySpec{GeometryKind::SuperNested2, 7}.name()), "snaq2");
  EXPECT_EQ(parse_geometry_kind("mra"), GeometryKind::Mra);
  EXPECT_THROW(parse_geometry_kind("coprime"), InvalidArgument);
}

TEST(Config, ParsesFullDocument) {
  const auto c = parse_config(R"({
    "geometries": [{"kind": "ula", "n": 7}, {"kind": "naq2", "n1": 4, "n2": 3}],
    "L": 3, "mu": 1,
    "thetas": [-0.7, -0.5, -0.3, 0.3, 0.5, 0.7],
    "snr_db": 10, "snr_sweep": [-10, 0, 10],
    "snapshots": 100, "seed": 5, "grid_size": 2001,
    "dedup_rule": "first-occurrence", "trials": 7,
    "algorithms": ["gca", "gmusic"], "phase_mode": "pinned",
    "refine_peaks": false, "exact_covariance": true, "output": "x.csv"
  })");
  ASSERT_EQ(c.geometries.size(), 2u);
  EXPECT_EQ(c.geometries[1].n, 7);
  EXPECT_EQ(c.snr_db_list, (std::vector<double>{-10, 0, 10}));
  EXPECT_EQ(c.dedup, DedupRule::FirstOccurrence);
  EXPECT_EQ(c.phase_mode, PhaseMode::PinnedReference);
  EXPECT_EQ(c.algorithms, (std::vector<Algorithm>{Algorithm::Gca, Algorithm::GMusic}));
  EXPECT_FALSE(c.refine_peaks);
  EXPECT_TRUE(c.exact_covariance);
  EXPECT_EQ(c.trials, 7);
  EXPECT_EQ(c.output, "x.csv");
}

TEST(Config, SingleSnrAndSingleAlgorithm) {
  const auto c = parse_config(
      R"({"geometry": {"kind": "mra", "n": 6}, "thetas": [0.1], "snr_db": 3, "algorithm": "avca"})");
  EXPECT_EQ(c.snr_db_list, (std::vector<double>{3}));
  EXPECT_EQ(c.algorithms, (std::vector<Algorithm>{Algorithm::Avca}));
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("{"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"thetas": [0.1], "colour": 1})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"thetas": [0.3, 0.1]})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"thetas": [0.1], "trials": 0})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"thetas": [0.1], "snr_sweep": []})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"thetas": "x"})"), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"thetas": [0.1], "geometry": {"kind": "mra", "n": 11}})"),
               Unsupported);
  EXPECT_THROW(load_config("/nonexistent/config.json"), IoError);
}

TEST(RunTrial, Deterministic) {
  const auto c = small_config();
  const GeometrySpec g;
  const auto a = run_trial(c, g, 5.0, Algorithm::Gca, 3);
  const auto b = run_trial(c, g, 5.0, Algorithm::Gca, 3);
  EXPECT_EQ(a.thetas, b.thetas);
  const auto other = run_trial(c, g, 5.0, Algorithm::Gca, 4);
  EXPECT_NE(a.thetas, other.thetas);
}

TEST(RunTrial, ExactCovarianceShortcut) {
  auto c = small_config();
  c.exact_covariance = true;
  const auto est = run_trial(c, GeometrySpec{}, 200.0, Algorithm::Gca, 0);
  ASSERT_EQ(est.thetas.size(), 6u);
  for (std::size_t d = 0; d < 6; ++d) EXPECT_LE(std::abs(est.thetas[d] - kSix[d]), 1e-3);
}

TEST(RunTrial, GMusicAtSensorCountThrows) {
  auto c = small_config();
  c.thetas = {-0.7, -0.5, -0.3, 0.0, 0.3, 0.5, 0.7};
  EXPECT_THROW(run_trial(c, GeometrySpec{}, 20.0, Algorithm::GMusic, 0), TooManySources);
  EXPECT_NO_THROW(run_trial(c, GeometrySpec{}, 20.0, Algorithm::Gca, 0));
}

TEST(RunTrial, DumpableIntermediates) {
  const auto c = small_config();
  const auto data = prepare_trial(c, GeometrySpec{}, 10.0, 0);
  EXPECT_EQ(data.covariances.size(), 3u);
  EXPECT_EQ(data.coarrays.size(), 3u);
  ASSERT_EQ(data.smoothed.size(), 3u);
  EXPECT_EQ(data.smoothed[2].window, 15);
  EXPECT_EQ(data.smoothed[2].subarray_index, 2);
}

TEST(Sweep, OneRowCsv) {
  auto c = small_config();
  c.trials = 1;
  c.snr_db_list = {10.0};
  c.algorithms = {Algorithm::Gca};
  const auto rows = sweep(c);
  ASSERT_EQ(rows.size(), 1u);
  std::ostringstream csv;
  write_csv(csv, rows);
  const std::string text = csv.str();
  EXPECT_EQ(text.rfind("geometry,algorithm,snr_db,trials,failures,rmse\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find("naq2,gca,10,1,0,"), std::string::npos);
}

TEST(Sweep, CsvNineSignificantDigits) {
  std::vector<RmseRow> rows{{"mra", Algorithm::Avca, -2.5, 10, 1, 0.0123456789012}};
  std::ostringstream csv;
  write_csv(csv, rows);
  EXPECT_NE(csv.str().find("mra,avca,-2.5,10,1,0.0123456789\n"), std::string::npos);
}

TEST(Sweep, RowAccounting) {
  auto c = small_config();
  c.geometries = {GeometrySpec{GeometryKind::Ula, 7}, GeometrySpec{}};
  c.thetas = {-0.7, -0.5, -0.3, 0.0, 0.3, 0.5, 0.7};  // ULA window 7 cannot hold 7 sources
  const auto rows = sweep(c);
  ASSERT_EQ(rows.size(), 2u * 2u * 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.trials + r.failures, c.trials);
    EXPECT_GE(r.rmse, 0.0);
    if (r.algorithm == Algorithm::GMusic || r.geometry == "ula") {
      EXPECT_EQ(r.failures, c.trials) << r.geometry << " " << to_string(r.algorithm);
      EXPECT_EQ(r.rmse, kFailureSentinelRmse);
    }
  }
  EXPECT_EQ(rows[0].geometry, "ula");
  EXPECT_EQ(rows[0].snr_db, 0.0);
  EXPECT_EQ(rows[1].algorithm, Algorithm::Avca);
}

TEST(Sweep, ParallelInvariance) {
  auto c = small_config();
  c.trials = 6;
  const auto serial = sweep(c, {1});
  const auto parallel = sweep(c, {4});
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].rmse, parallel[i].rmse);
    EXPECT_EQ(serial[i].failures, parallel[i].failures);
  }
}

TEST(Sweep, MatchesPerTrialRmse) {
  auto c = small_config();
  c.snr_db_list = {5.0};
  c.algorithms = {Algorithm::Gca};
  std::vector<DoaEstimate> ests;
  for (int t = 0; t < c.trials; ++t) ests.push_back(run_trial(c, GeometrySpec{}, 5.0, Algorithm::Gca, t));
  const auto rows = sweep(c);
  EXPECT_NEAR(rows[0].rmse, rmse(c.sources(), ests), 1e-15);
}

TEST(Sweep, UnwritablePathFailsBeforeWork) {
  auto c = small_config();
  c.trials = 100000;
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(sweep_to_csv(c, "/nonexistent-dir/out.csv"), IoError);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
}

TEST(Sweep, HighSnrNoWorseThanLowSnr) {
  auto c = small_config();
  c.trials = 100;
  c.snr_db_list = {-10.0, 20.0};
  c.algorithms = {Algorithm::Gca};
  const auto rows = sweep(c);
  EXPECT_LE(rows[1].rmse, rows[0].rmse);
}

} // namespace
} // namespace gcamusic
