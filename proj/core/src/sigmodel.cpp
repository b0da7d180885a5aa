// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/sigmodel.hpp>

#include <cmath>
#include <numeric>

namespace gcamusic {

namespace {

void check_theta(double theta) {
  if (!(theta >= -1.0 && theta < 1.0)) {
    throw InvalidArgument("normalized direction must lie in [-1, 1)");
  }
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Circular CN(0, 1): real and imaginary parts N(0, 1/2).
void fill_circular_gaussian(CMatrix& m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = Complex(re, im);
    }
  }
}

} // namespace

SourceSet::SourceSet(std::vector<double> thetas, std::vector<double> powers)
    : thetas_(std::move(thetas)), powers_(std::move(powers)) {
  if (thetas_.empty()) throw InvalidArgument("source set is empty");
  if (thetas_.size() != powers_.size()) {
    throw InvalidArgument("source directions and powers differ in length");
  }
  for (std::size_t d = 0; d < thetas_.size(); ++d) {
    check_theta(thetas_[d]);
    if (!(powers_[d] > 0.0)) throw InvalidArgument("source powers must be positive");
    if (d > 0 && !(thetas_[d] > thetas_[d - 1])) {
      throw InvalidArgument("source directions must be strictly increasing");
    }
  }
}

SourceSet::SourceSet(std::vector<double> thetas)
    : SourceSet(thetas, std::vector<double>(thetas.size(), 1.0)) {}

double SourceSet::total_power() const noexcept {
  return std::accumulate(powers_.begin(), powers_.end(), 0.0);
}

double noise_power_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

std::mt19937_64 make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  const std::uint64_t a = mix64(master_seed);
  const std::uint64_t b = mix64(a ^ mix64(trial_index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
  return std::mt19937_64(seq);
}

CVector steering_vector(std::span<const int> positions, double theta) {
  check_theta(theta);
  CVector a(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    a(static_cast<Eigen::Index>(i)) = std::polar(1.0, kPi * positions[i] * theta);
  }
  return a;
}

CMatrix steering_matrix(std::span<const int> positions, const SourceSet& sources) {
  CMatrix a(static_cast<Eigen::Index>(positions.size()), sources.count());
  for (int d = 0; d < sources.count(); ++d) {
    a.col(d) = steering_vector(positions, sources.thetas()[static_cast<std::size_t>(d)]);
  }
  return a;
}

CMatrix exact_covariance(std::span<const int> positions, const SourceSet& sources,
                         double noise_power) {
  if (noise_power < 0.0) throw InvalidArgument("noise power must be non-negative");
  const CMatrix a = steering_matrix(positions, sources);
  RVector p(sources.count());
  for (int d = 0; d < sources.count(); ++d) p(d) = sources.powers()[static_cast<std::size_t>(d)];
  CMatrix r = a * p.asDiagonal() * a.adjoint();
  r.diagonal().array() += noise_power;
  // Clean rounding asymmetry so the result is Hermitian to the bit.
  return (0.5 * (r + r.adjoint())).eval();
}

SignalRealization draw_realization(const Scenario& scenario, std::mt19937_64& rng) {
  if (scenario.snapshots < 1) throw InvalidArgument("snapshot count must be >= 1");
  const int subarrays = scenario.layout.subarrays;
  const auto n = static_cast<Eigen::Index>(scenario.layout.base.size());
  SignalRealization out;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  out.phases.resize(static_cast<std::size_t>(subarrays));
  for (double& phi : out.phases) phi = phase(rng);
  if (scenario.phase_mode == PhaseMode::PinnedReference) out.phases.front() = 0.0;

  out.sources.resize(scenario.sources.count(), scenario.snapshots);
  fill_circular_gaussian(out.sources, rng);
  out.noise.reserve(static_cast<std::size_t>(subarrays));
  for (int l = 0; l < subarrays; ++l) {
    CMatrix noise(n, scenario.snapshots);
    fill_circular_gaussian(noise, rng);
    out.noise.push_back(std::move(noise));
  }
  return out;
}

SnapshotBatch assemble_snapshots(const Scenario& scenario, const SignalRealization& draws) {
  const auto& layout = scenario.layout;
  const auto subarrays = static_cast<std::size_t>(layout.subarrays);
  if (draws.noise.size() != subarrays || draws.phases.size() != subarrays) {
    throw InvalidArgument("realization does not match the subarray count");
  }
  RVector amplitude(scenario.sources.count());
  for (int d = 0; d < scenario.sources.count(); ++d) {
    amplitude(d) = std::sqrt(scenario.sources.powers()[static_cast<std::size_t>(d)]);
  }
  const CMatrix signals = amplitude.asDiagonal() * draws.sources;
  const double noise_scale = std::sqrt(scenario.noise_power);

  SnapshotBatch batch;
  batch.phases = draws.phases;
  batch.data.reserve(subarrays);
  for (std::size_t l = 0; l < subarrays; ++l) {
    const CMatrix a = steering_matrix(layout.subarray_positions(static_cast<int>(l)),
                                      scenario.sources);
    // Circular noise is rotation invariant, so the stored draw is taken in the
    // subarray's own frame: exp(-j phi) (A s + n~) has the same law as
    // exp(-j phi) A s + n, and a redrawn phi leaves every statistic unchanged.
    CMatrix x = a * signals + noise_scale * draws.noise[l];
    x *= std::polar(1.0, -draws.phases[l]);
    batch.data.push_back(std::move(x));
  }
  return batch;
}

SnapshotBatch simulate_snapshots(const Scenario& scenario, std::mt19937_64& rng) {
  return assemble_snapshots(scenario, draw_realization(scenario, rng));
}

SnapshotBatch simulate_snapshots(const Scenario& scenario) {
  std::mt19937_64 rng = make_trial_rng(scenario.seed, 0);
  return simulate_snapshots(scenario, rng);
}

CMatrix sample_covariance(const CMatrix& snapshots) {
  if (snapshots.cols() < 1 || snapshots.rows() < 1) {
    throw InvalidArgument("sample covariance needs at least one snapshot");
  }
  CMatrix r = (snapshots * snapshots.adjoint()) / static_cast<double>(snapshots.cols());
  return (0.5 * (r + r.adjoint())).eval();
}

} // namespace gcamusic
