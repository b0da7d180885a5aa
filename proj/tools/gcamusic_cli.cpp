// SPDX-License-Identifier: Apache-2.0
//
// gcamusic geometry | run | sweep

#include <gcamusic/harness.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace gcamusic;

void print_positions(const char* label, std::span<const int> p) {
  std::printf("%s\t", label);
  for (std::size_t i = 0; i < p.size(); ++i) std::printf(i ? " %d" : "%d", p[i]);
  std::printf("\n");
}

void print_weights(const char* title, const CoarrayProfile& c) {
  std::printf("# %s\n", title);
  for (const auto& [lag, w] : c.weights) std::printf("%d\t%d\n", lag, w);
}

int cmd_geometry(const std::string& kind, int n, int n1, int n2, int subarrays, int mu) {
  GeometrySpec spec{parse_geometry_kind(kind), n, n1, n2};
  if (n1 > 0 && n2 > 0) spec.n = n1 + n2;
  const ArrayGeometry base = spec.build();
  const auto sub = difference_coarray(base);
  const auto comp = compose_type2(base, subarrays, mu);
  const auto whole = difference_coarray(comp.whole);

  std::printf("kind\t%s\n", spec.name().c_str());
  print_positions("positions", base.positions());
  std::printf("sensors\t%zu\naperture\t%d\n", base.size(), base.aperture());
  std::printf("subarray_sdof\t%zu\ncontiguous_half\t%d\n", sub.sdof(), sub.contiguous_half);
  std::printf("L\t%d\nmu\t%d\n", subarrays, mu);
  print_positions("offsets", comp.layout.offsets);
  print_positions("whole_positions", comp.whole.positions());
  std::printf("whole_dof\t%d\n", comp.whole_dof);
  if (sub.sdof() % 2 == 1) {
    std::printf("dof_bound\t%d\n",
                dof_bound(subarrays, static_cast<int>(sub.sdof()), mu, base.aperture()));
  }
  print_weights("subarray weight function (lag\tweight)", sub);
  print_weights("whole-array weight function (lag\tweight)", whole);
  return 0;
}

void dump_intermediates(const TrialData& data) {
  for (std::size_t l = 0; l < data.coarrays.size(); ++l) {
    std::printf("# coarray subarray %zu (lag\tre\tim)\n", l);
    const auto& c = data.coarrays[l];
    for (std::size_t k = 0; k < c.lags.size(); ++k) {
      const Complex v = c.values(static_cast<Eigen::Index>(k));
      std::printf("%d\t%.9g\t%.9g\n", c.lags[k], v.real(), v.imag());
    }
  }
  for (const auto& rss : data.smoothed) {
    std::printf("# smoothed eigenvalues subarray %d (index\tvalue)\n", rss.subarray_index);
    RVector beta;
    CMatrix vectors;
    hermitian_eigen(rss.matrix, beta, vectors);
    for (Eigen::Index i = 0; i < beta.size(); ++i) std::printf("%ld\t%.9g\n", static_cast<long>(i), beta(i));
  }
}

int cmd_run(const std::string& config_path, const std::string& algorithm_name,
            const std::string& spectrum_path, bool intermediates,
            std::optional<std::uint64_t> seed, std::uint64_t trial) {
  ExperimentConfig config = load_config(config_path);
  if (seed) config.seed = *seed;
  const Algorithm algorithm = parse_algorithm(algorithm_name);
  const GeometrySpec& geometry = config.geometries.front();
  const double snr = config.snr_db_list.front();

  std::ofstream spectrum_out;
  if (!spectrum_path.empty()) {
    spectrum_out.open(spectrum_path);
    if (!spectrum_out) throw IoError("cannot open '" + spectrum_path + "' for writing");
  }

  const TrialData data = prepare_trial(config, geometry, snr, trial);
  if (intermediates) dump_intermediates(data);
  const EstimatorResult result = estimate(config, data, algorithm);

  std::printf("algorithm\t%s\ngeometry\t%s\nsnr_db\t%g\n", std::string(to_string(algorithm)).c_str(),
              geometry.name().c_str(), snr);
  for (double t : config.thetas) std::printf("theta\t%.6f\n", t);
  for (double t : result.estimate.thetas) std::printf("theta_hat\t%.6f\n", t);
  std::printf("degraded_peaks\t%d\n", result.estimate.degraded_peaks ? 1 : 0);
  const std::vector<DoaEstimate> one{result.estimate};
  std::printf("rmse\t%.9g\n", rmse(config.sources(), one));

  if (spectrum_out.is_open()) {
    char line[64];
    for (std::size_t k = 0; k < result.spectrum.size(); ++k) {
      std::snprintf(line, sizeof line, "%.9g\t%.9g\n", result.spectrum.grid[k],
                    result.spectrum.values[k]);
      spectrum_out << line;
    }
    if (!spectrum_out) throw IoError("failed writing '" + spectrum_path + "'");
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, std::string out_path, int workers,
              std::optional<std::uint64_t> seed) {
  ExperimentConfig config = load_config(config_path);
  if (seed) config.seed = *seed;
  if (out_path.empty()) out_path = config.output;
  if (out_path.empty()) throw InvalidArgument("no output path: pass --out or set 'output'");
  const auto rows = sweep_to_csv(config, out_path, SweepOptions{workers});
  write_csv(std::cout, rows);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partially calibrated sparse subarray DOA estimation"};
  app.require_subcommand(1);

  std::string kind = "naq2";
  int n = 7, n1 = 0, n2 = 0, subarrays = 3, mu = 1;
  auto* geometry = app.add_subcommand("geometry", "Print positions, DoF and weight functions");
  geometry->add_option("--kind", kind, "ula | naq2 | snaq2 | mra")
      ->check(CLI::IsMember({"ula", "naq2", "snaq2", "mra"}));
  geometry->add_option("--n", n, "Sensors per subarray");
  geometry->add_option("--n1", n1, "Nested inner level size");
  geometry->add_option("--n2", n2, "Nested outer level size");
  geometry->add_option("--L", subarrays, "Number of subarrays");
  geometry->add_option("--mu", mu, "Normalized gap between subarrays");

  std::string config_path, algorithm = "gca", spectrum_path, out_path;
  bool intermediates = false;
  std::optional<std::uint64_t> seed;
  std::uint64_t trial = 0;
  int workers = 1;
  auto* run = app.add_subcommand("run", "Run a single trial and print the estimates");
  run->add_option("--config", config_path, "Scenario JSON file")->required();
  run->add_option("--algorithm", algorithm, "gca | gmusic | avca")
      ->check(CLI::IsMember({"gca", "gmusic", "avca"}));
  run->add_option("--dump-spectrum", spectrum_path, "Write theta<TAB>value lines here");
  run->add_flag("--dump-intermediates", intermediates, "Print coarray values and eigenvalues");
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--trial", trial, "Trial index (selects the random substream)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo RMSE sweep to CSV");
  sweep_cmd->add_option("--config", config_path, "Scenario JSON file")->required();
  sweep_cmd->add_option("--out", out_path, "CSV output path (defaults to config 'output')");
  sweep_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", seed, "Override the master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*geometry) return cmd_geometry(kind, n, n1, n2, subarrays, mu);
    if (*run) return cmd_run(config_path, algorithm, spectrum_path, intermediates, seed, trial);
    if (*sweep_cmd) return cmd_sweep(config_path, out_path, workers, seed);
  } catch (const TooManySources& e) {
    std::fprintf(stderr, "too many sources: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
