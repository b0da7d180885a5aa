// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/harness.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <mutex>
#include <thread>

namespace gcamusic {

GeometryKind parse_geometry_kind(std::string_view name) {
  if (name == "ula") return GeometryKind::Ula;
  if (name == "naq2" || name == "nested") return GeometryKind::Nested2;
  if (name == "snaq2" || name == "super-nested") return GeometryKind::SuperNested2;
  if (name == "mra") return GeometryKind::Mra;
  throw InvalidArgument("unknown geometry kind '" + std::string(name) + "'");
}

ArrayGeometry GeometrySpec::build() const {
  const int inner = n1 > 0 ? n1 : (n + 1) / 2;
  const int outer = n2 > 0 ? n2 : n / 2;
  switch (kind) {
  case GeometryKind::Ula: return build_ula(n);
  case GeometryKind::Nested2: return build_nested2(inner, outer);
  case GeometryKind::SuperNested2: return build_super_nested2(inner, outer);
  case GeometryKind::Mra: return build_mra(n);
  }
  throw InvalidArgument("unknown geometry kind");
}

std::string GeometrySpec::name() const {
  switch (kind) {
  case GeometryKind::Ula: return "ula";
  case GeometryKind::Nested2: return "naq2";
  case GeometryKind::SuperNested2: return "snaq2";
  case GeometryKind::Mra: return "mra";
  }
  return "unknown";
}

SourceSet ExperimentConfig::sources() const {
  if (powers.empty()) return SourceSet(thetas);
  return SourceSet(thetas, powers);
}

void ExperimentConfig::validate() const {
  if (geometries.empty()) throw InvalidArgument("config lists no geometries");
  for (const auto& g : geometries) (void)g.build();
  if (subarrays < 1) throw InvalidArgument("L must be >= 1");
  if (mu < 1) throw InvalidArgument("mu must be >= 1");
  if (thetas.empty()) throw InvalidArgument("config lists no source directions");
  (void)sources();
  if (snapshots < 1) throw InvalidArgument("snapshots must be >= 1");
  if (snr_db_list.empty()) throw InvalidArgument("SNR list is empty");
  if (algorithms.empty()) throw InvalidArgument("config lists no algorithms");
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (grid_size < 3) throw InvalidArgument("grid_size must be >= 3");
}

TrialData prepare_trial(const ExperimentConfig& config, const GeometrySpec& geometry,
                        double snr_db, std::uint64_t trial_index) {
  const ArrayGeometry base = geometry.build();
  TrialData data;
  data.layout = compose_type2(base, config.subarrays, config.mu).layout;
  const SourceSet sources = config.sources();
  const double noise_power = noise_power_from_snr_db(snr_db);

  if (config.exact_covariance) {
    for (int l = 0; l < config.subarrays; ++l) {
      data.covariances.push_back(
          exact_covariance(data.layout.subarray_positions(l), sources, noise_power));
    }
  } else {
    Scenario scenario{data.layout, sources, noise_power, config.snapshots, config.seed,
                      config.phase_mode};
    std::mt19937_64 rng = make_trial_rng(config.seed, trial_index);
    const SnapshotBatch batch = simulate_snapshots(scenario, rng);
    for (const auto& x : batch.data) data.covariances.push_back(sample_covariance(x));
  }

  for (int l = 0; l < config.subarrays; ++l) {
    auto coarray = covariance_to_coarray(data.covariances[static_cast<std::size_t>(l)], base,
                                         config.dedup);
    if (coarray.contiguous_half() >= 1) data.smoothed.push_back(spatial_smooth(coarray, l));
    data.coarrays.push_back(std::move(coarray));
  }
  return data;
}

EstimatorResult estimate(const ExperimentConfig& config, const TrialData& data,
                         Algorithm algorithm) {
  const int d = static_cast<int>(config.thetas.size());
  const SearchOptions options{config.grid_size, PeakOptions{config.refine_peaks}};
  if (algorithm == Algorithm::GMusic) {
    return g_music(data.covariances, data.layout, d, options);
  }
  if (data.smoothed.size() != data.coarrays.size()) {
    throw DegenerateCoarray("subarray coarray has no contiguous center to smooth");
  }
  std::vector<SubspaceDecomposition> subspaces;
  subspaces.reserve(data.smoothed.size());
  for (const auto& rss : data.smoothed) subspaces.push_back(signal_subspace(rss, d));
  return algorithm == Algorithm::Gca ? gca_music(subspaces, d, options)
                                     : avca_music(subspaces, d, options);
}

DoaEstimate run_trial(const ExperimentConfig& config, const GeometrySpec& geometry,
                      double snr_db, Algorithm algorithm, std::uint64_t trial_index) {
  return estimate(config, prepare_trial(config, geometry, snr_db, trial_index), algorithm)
      .estimate;
}

double rmse(const SourceSet& truth, std::span<const DoaEstimate> estimates) {
  if (estimates.empty()) throw InvalidArgument("rmse needs at least one estimate");
  const auto theta = truth.thetas();
  double sum = 0.0;
  for (const auto& e : estimates) {
    if (e.thetas.size() != theta.size()) {
      throw InvalidArgument("estimate and truth differ in source count");
    }
    for (std::size_t d = 0; d < theta.size(); ++d) {
      const double err = theta[d] - e.thetas[d];
      sum += err * err;
    }
  }
  return std::sqrt(sum / (static_cast<double>(theta.size()) * estimates.size()));
}

namespace {

struct Outcome {
  bool failed = false;
  double squared_error = 0.0;
};

} // namespace

std::vector<RmseRow> sweep(const ExperimentConfig& config, SweepOptions options) {
  config.validate();
  const std::size_t n_geom = config.geometries.size();
  const std::size_t n_snr = config.snr_db_list.size();
  const std::size_t n_alg = config.algorithms.size();
  const auto n_trials = static_cast<std::size_t>(config.trials);
  const std::size_t n_items = n_geom * n_snr * n_trials;
  const SourceSet truth = config.sources();
  const auto theta = truth.thetas();

  // outcomes[item * n_alg + a], item = (g * n_snr + s) * n_trials + t
  std::vector<Outcome> outcomes(n_items * n_alg);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto work = [&] {
    for (std::size_t item = next++; item < n_items; item = next++) {
      const std::size_t t = item % n_trials;
      const std::size_t s = (item / n_trials) % n_snr;
      const std::size_t g = item / (n_trials * n_snr);
      try {
        const TrialData data =
            prepare_trial(config, config.geometries[g], config.snr_db_list[s], t);
        for (std::size_t a = 0; a < n_alg; ++a) {
          Outcome& out = outcomes[item * n_alg + a];
          try {
            const DoaEstimate est = estimate(config, data, config.algorithms[a]).estimate;
            if (est.degraded_peaks) {
              out.failed = true;
              continue;
            }
            for (std::size_t d = 0; d < theta.size(); ++d) {
              const double err = theta[d] - est.thetas[d];
              out.squared_error += err * err;
            }
          } catch (const TooManySources&) {
            out.failed = true;
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_items;
      }
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  std::vector<RmseRow> rows;
  for (std::size_t g = 0; g < n_geom; ++g) {
    for (std::size_t s = 0; s < n_snr; ++s) {
      for (std::size_t a = 0; a < n_alg; ++a) {
        RmseRow row{config.geometries[g].name(), config.algorithms[a], config.snr_db_list[s]};
        double sum = 0.0;
        for (std::size_t t = 0; t < n_trials; ++t) {
          const Outcome& out = outcomes[((g * n_snr + s) * n_trials + t) * n_alg + a];
          if (out.failed) {
            ++row.failures;
          } else {
            ++row.trials;
            sum += out.squared_error;
          }
        }
        row.rmse = row.trials == 0
                       ? kFailureSentinelRmse
                       : std::sqrt(sum / (static_cast<double>(theta.size()) * row.trials));
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_csv(std::ostream& out, std::span<const RmseRow> rows) {
  out << "geometry,algorithm,snr_db,trials,failures,rmse\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.geometry << ',' << to_string(r.algorithm) << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.snr_db);
    out << buf << ',' << r.trials << ',' << r.failures << ',';
    std::snprintf(buf, sizeof buf, "%.9g", r.rmse);
    out << buf << '\n';
  }
}

std::vector<RmseRow> sweep_to_csv(const ExperimentConfig& config,
                                  const std::filesystem::path& path, SweepOptions options) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  auto rows = sweep(config, options);
  write_csv(out, rows);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  return rows;
}

} // namespace gcamusic
