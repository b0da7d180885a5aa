// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/harness.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace gcamusic {

namespace {

using nlohmann::json;

GeometrySpec parse_geometry(const json& j) {
  if (!j.is_object()) throw InvalidArgument("geometry entry must be an object");
  GeometrySpec g;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") g.kind = parse_geometry_kind(value.get<std::string>());
    else if (key == "n") g.n = value.get<int>();
    else if (key == "n1") g.n1 = value.get<int>();
    else if (key == "n2") g.n2 = value.get<int>();
    else throw InvalidArgument("unknown geometry key '" + key + "'");
  }
  if (g.n1 > 0 && g.n2 > 0) g.n = g.n1 + g.n2;
  return g;
}

template <typename T>
std::vector<T> as_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

} // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw InvalidArgument("config root must be an object");

  ExperimentConfig c;
  bool have_snr_sweep = false;
  std::optional<double> single_snr;
  try {
    for (const auto& [key, value] : root.items()) {
      if (key == "geometry") {
        c.geometries = {parse_geometry(value)};
      } else if (key == "geometries") {
        c.geometries.clear();
        for (const auto& g : value) c.geometries.push_back(parse_geometry(g));
      } else if (key == "L") {
        c.subarrays = value.get<int>();
      } else if (key == "mu") {
        c.mu = value.get<int>();
      } else if (key == "thetas") {
        c.thetas = value.get<std::vector<double>>();
      } else if (key == "powers") {
        c.powers = value.get<std::vector<double>>();
      } else if (key == "snapshots") {
        c.snapshots = value.get<int>();
      } else if (key == "snr_db") {
        single_snr = value.get<double>();
      } else if (key == "snr_sweep") {
        c.snr_db_list = value.get<std::vector<double>>();
        have_snr_sweep = true;
      } else if (key == "algorithms" || key == "algorithm") {
        c.algorithms.clear();
        for (const auto& name : as_list<std::string>(value)) {
          c.algorithms.push_back(parse_algorithm(name));
        }
      } else if (key == "trials") {
        c.trials = value.get<int>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "grid_size") {
        c.grid_size = value.get<int>();
      } else if (key == "refine_peaks") {
        c.refine_peaks = value.get<bool>();
      } else if (key == "dedup_rule") {
        c.dedup = parse_dedup_rule(value.get<std::string>());
      } else if (key == "phase_mode") {
        const auto mode = value.get<std::string>();
        if (mode == "random") c.phase_mode = PhaseMode::Random;
        else if (mode == "pinned") c.phase_mode = PhaseMode::PinnedReference;
        else throw InvalidArgument("phase_mode must be 'random' or 'pinned'");
      } else if (key == "exact_covariance") {
        c.exact_covariance = value.get<bool>();
      } else if (key == "output") {
        c.output = value.get<std::string>();
      } else {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config value has the wrong type: ") + e.what());
  }
  // A lone snr_db is the sweep when no snr_sweep is given.
  if (single_snr && !have_snr_sweep) c.snr_db_list = {*single_snr};
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

} // namespace gcamusic
