// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo driver: per-trial pipelines, RMSE aggregation and CSV output.

#pragma once

#include <gcamusic/coarray.hpp>
#include <gcamusic/estimators.hpp>
#include <gcamusic/geometry.hpp>
#include <gcamusic/sigmodel.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gcamusic {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class GeometryKind { Ula, Nested2, SuperNested2, Mra };

struct GeometrySpec {
  GeometryKind kind = GeometryKind::Nested2;
  int n = 7;    // total sensors (ula, mra; default split for the nested kinds)
  int n1 = 0;   // nested inner level; 0 means ceil(n / 2)
  int n2 = 0;   // nested outer level; 0 means floor(n / 2)

  ArrayGeometry build() const;
  std::string name() const;  // "ula", "naq2", "snaq2", "mra"
};

GeometryKind parse_geometry_kind(std::string_view name);

struct ExperimentConfig {
  std::vector<GeometrySpec> geometries{GeometrySpec{}};
  int subarrays = 3;
  int mu = 1;
  std::vector<double> thetas;
  std::vector<double> powers;            // empty: unit powers
  int snapshots = 100;
  std::vector<double> snr_db_list{10.0};
  std::vector<Algorithm> algorithms{Algorithm::Gca};
  int trials = 200;
  std::uint64_t seed = 1;
  int grid_size = kDefaultGridSize;
  bool refine_peaks = true;
  DedupRule dedup = DedupRule::Average;
  PhaseMode phase_mode = PhaseMode::Random;
  bool exact_covariance = false;         // skip snapshots, use analytic covariances
  std::string output;                    // default CSV path for sweeps

  SourceSet sources() const;
  void validate() const;
};

/// Reads a JSON scenario file. Unknown keys are rejected.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view json_text);

/// Per-subarray data products of one trial, kept for debugging dumps.
struct TrialData {
  TypeIILayout layout;
  std::vector<CMatrix> covariances;      // N x N per subarray
  std::vector<CoarraySignal> coarrays;
  std::vector<SmoothedCovariance> smoothed;
};

/// Simulates (or computes exactly) the per-subarray covariances of one trial
/// and their coarray-domain products.
TrialData prepare_trial(const ExperimentConfig& config, const GeometrySpec& geometry,
                        double snr_db, std::uint64_t trial_index);

EstimatorResult estimate(const ExperimentConfig& config, const TrialData& data,
                         Algorithm algorithm);

/// Full pipeline for one trial. Deterministic in (config.seed, trial_index).
DoaEstimate run_trial(const ExperimentConfig& config, const GeometrySpec& geometry,
                      double snr_db, Algorithm algorithm, std::uint64_t trial_index);

/// sqrt( sum_i ||truth - est_i||^2 / (D R) ), index-wise pairing.
double rmse(const SourceSet& truth, std::span<const DoaEstimate> estimates);

/// Reported RMSE when every trial of a cell failed.
inline constexpr double kFailureSentinelRmse = 1.0;

struct RmseRow {
  std::string geometry;
  Algorithm algorithm = Algorithm::Gca;
  double snr_db = 0.0;
  int trials = 0;      // trials that contributed to rmse
  int failures = 0;    // too-many-sources or degraded peaks
  double rmse = 0.0;
};

struct SweepOptions {
  int workers = 1;
};

/// Every geometry x snr x algorithm cell, `config.trials` trials each.
/// Rows are ordered geometry-major, then snr, then algorithm.
std::vector<RmseRow> sweep(const ExperimentConfig& config, SweepOptions options = {});

void write_csv(std::ostream& out, std::span<const RmseRow> rows);

/// Opens `path` before any work so unwritable paths fail fast.
std::vector<RmseRow> sweep_to_csv(const ExperimentConfig& config,
                                  const std::filesystem::path& path,
                                  SweepOptions options = {});

} // namespace gcamusic
