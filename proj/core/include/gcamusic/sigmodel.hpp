// SPDX-License-Identifier: Apache-2.0
//
// Narrowband data model for partially calibrated subarrays: each subarray
// sees the common sources through its own manifold, rotated by an unknown
// phase, plus independent white noise.

#pragma once

#include <gcamusic/geometry.hpp>
#include <gcamusic/types.hpp>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gcamusic {

/// Normalized directions (sine of the DOA) in [-1, 1), strictly increasing,
/// with one positive power per source.
class SourceSet {
public:
  SourceSet(std::vector<double> thetas, std::vector<double> powers);
  /// Unit powers.
  explicit SourceSet(std::vector<double> thetas);

  std::span<const double> thetas() const noexcept { return thetas_; }
  std::span<const double> powers() const noexcept { return powers_; }
  int count() const noexcept { return static_cast<int>(thetas_.size()); }
  double total_power() const noexcept;

private:
  std::vector<double> thetas_;
  std::vector<double> powers_;
};

/// Noise power for unit-power sources at the given SNR in dB.
double noise_power_from_snr_db(double snr_db);

enum class PhaseMode {
  Random,          // every phi_l ~ U(0, 2pi)
  PinnedReference, // phi_1 = 0, the rest random
};

struct Scenario {
  TypeIILayout layout;
  SourceSet sources;
  double noise_power = 1.0;
  int snapshots = 100;
  std::uint64_t seed = 0;
  PhaseMode phase_mode = PhaseMode::Random;
};

/// Unit-variance random draws behind one batch. Scaling by the source powers
/// and noise power happens at assembly, so the same realization can be
/// replayed at any SNR or with different phases.
struct SignalRealization {
  CMatrix sources;              // D x T, CN(0, 1) entries
  std::vector<CMatrix> noise;   // L entries, N x T, CN(0, 1)
  std::vector<double> phases;   // L entries in [0, 2pi)
};

struct SnapshotBatch {
  std::vector<CMatrix> data;    // L entries, N x T
  std::vector<double> phases;
};

/// Deterministic per-trial stream derived from a master seed.
std::mt19937_64 make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index);

CVector steering_vector(std::span<const int> positions, double theta);
inline CVector steering_vector(const ArrayGeometry& geom, double theta) {
  return steering_vector(geom.positions(), theta);
}

CMatrix steering_matrix(std::span<const int> positions, const SourceSet& sources);
inline CMatrix steering_matrix(const ArrayGeometry& geom, const SourceSet& sources) {
  return steering_matrix(geom.positions(), sources);
}

/// A diag(p) A^H + noise_power I.
CMatrix exact_covariance(std::span<const int> positions, const SourceSet& sources,
                         double noise_power);
inline CMatrix exact_covariance(const ArrayGeometry& geom, const SourceSet& sources,
                                double noise_power) {
  return exact_covariance(geom.positions(), sources, noise_power);
}

SignalRealization draw_realization(const Scenario& scenario, std::mt19937_64& rng);

/// x_l(t) = exp(-j phi_l) A_l s(t) + n_l(t).
SnapshotBatch assemble_snapshots(const Scenario& scenario, const SignalRealization& draws);

/// Draws a realization from the scenario's seed and assembles it.
SnapshotBatch simulate_snapshots(const Scenario& scenario);
SnapshotBatch simulate_snapshots(const Scenario& scenario, std::mt19937_64& rng);

/// (1/T) X X^H.
CMatrix sample_covariance(const CMatrix& snapshots);

} // namespace gcamusic
