// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/estimators.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gcamusic {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "gca") return Algorithm::Gca;
  if (name == "gmusic") return Algorithm::GMusic;
  if (name == "avca") return Algorithm::Avca;
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
  case Algorithm::Gca: return "gca";
  case Algorithm::GMusic: return "gmusic";
  case Algorithm::Avca: return "avca";
  }
  return "unknown";
}

SpectrumGrid make_grid(int size) {
  if (size < 2) throw InvalidArgument("spectrum grid needs at least two points");
  SpectrumGrid g;
  g.grid.resize(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) {
    g.grid[static_cast<std::size_t>(k)] = -1.0 + 2.0 * k / size;
  }
  g.values.assign(static_cast<std::size_t>(size), 0.0);
  return g;
}

MergedProjector merged_projector(std::span<const CMatrix> signal_bases) {
  Eigen::Index total = 0;
  for (const auto& u : signal_bases) total += u.rows();
  MergedProjector out;
  out.projector = CMatrix::Zero(total, total);
  Eigen::Index at = 0;
  for (const auto& u : signal_bases) {
    out.projector.block(at, at, u.rows(), u.rows()) = u * u.adjoint();
    at += u.rows();
  }
  out.complement = CMatrix::Identity(total, total) - out.projector;
  return out;
}

RVector null_spectrum_denominator(const CMatrix& signal_basis, const CMatrix& steering) {
  if (signal_basis.rows() != steering.rows()) {
    throw InvalidArgument("signal basis and steering vectors differ in length");
  }
  const CMatrix projected = signal_basis.adjoint() * steering;
  RVector den = steering.colwise().squaredNorm().transpose() -
                projected.colwise().squaredNorm().transpose();
  return den.cwiseMax(kDenominatorFloor);
}

CMatrix virtual_steering_grid(int window, std::span<const double> grid) {
  CMatrix a(window, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (int m = 0; m < window; ++m) {
      a(m, static_cast<Eigen::Index>(g)) = std::polar(1.0, kPi * m * grid[g]);
    }
  }
  return a;
}

namespace {

double refine_offset(const std::vector<double>& values, std::size_t k) {
  const auto db = [&](std::size_t i) { return 10.0 * std::log10(std::max(values[i], 1e-300)); };
  const double left = db(k - 1), mid = db(k), right = db(k + 1);
  const double curvature = left - 2.0 * mid + right;
  if (!(curvature < 0.0)) return 0.0;
  return std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
}

void check_subspaces(std::span<const SubspaceDecomposition> subspaces, int sources) {
  if (subspaces.empty()) throw InvalidArgument("no subarray subspaces supplied");
  if (sources < 1) throw InvalidArgument("source count must be >= 1");
  const int dim = subspaces.front().dimension();
  for (const auto& s : subspaces) {
    if (s.dimension() != dim) {
      throw InvalidArgument("subarray subspaces have different window sizes");
    }
    if (s.sources() != sources) {
      throw InvalidArgument("subspace rank does not match the requested source count");
    }
  }
  if (sources >= dim) {
    throw TooManySources("coarray MUSIC identifies at most " + std::to_string(dim - 1) +
                         " sources with window " + std::to_string(dim));
  }
}

std::vector<double> eigen_gaps(std::span<const SubspaceDecomposition> subspaces, int sources) {
  std::vector<double> gaps;
  for (const auto& s : subspaces) {
    gaps.push_back(s.eigenvalues(sources - 1) - s.eigenvalues(sources));
  }
  return gaps;
}

} // namespace

DoaEstimate find_peaks(const SpectrumGrid& spectrum, int sources, PeakOptions options) {
  const std::size_t g = spectrum.size();
  if (g < 3) throw InvalidArgument("peak search needs at least three grid points");
  if (sources < 1 || static_cast<std::size_t>(sources) > g) {
    throw InvalidArgument("invalid number of peaks requested");
  }
  const auto& v = spectrum.values;

  // Interior local maxima; a flat top counts once, at its leftmost point.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < g;) {
    if (v[i] > v[i - 1]) {
      std::size_t j = i;
      while (j + 1 < g && v[j + 1] == v[i]) ++j;
      if (j + 1 < g && v[j + 1] < v[i]) peaks.push_back(i);
      i = j + 1;
    } else {
      ++i;
    }
  }

  DoaEstimate est;
  const auto by_value = [&](std::size_t a, std::size_t b) {
    return v[a] != v[b] ? v[a] > v[b] : a < b;
  };
  std::vector<std::size_t> chosen;
  if (peaks.size() >= static_cast<std::size_t>(sources)) {
    std::stable_sort(peaks.begin(), peaks.end(), by_value);
    chosen.assign(peaks.begin(), peaks.begin() + sources);
  } else {
    est.degraded_peaks = true;
    std::vector<std::size_t> all(g);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::partial_sort(all.begin(), all.begin() + sources, all.end(), by_value);
    chosen.assign(all.begin(), all.begin() + sources);
  }
  std::sort(chosen.begin(), chosen.end());

  const double step = spectrum.step();
  for (std::size_t k : chosen) {
    double theta = spectrum.grid[k];
    const bool interior = k > 0 && k + 1 < g;
    if (options.refine && interior && !est.degraded_peaks) {
      theta += refine_offset(v, k) * step;
    }
    theta = std::clamp(theta, -1.0, std::nextafter(1.0, 0.0));
    est.thetas.push_back(theta);
    est.grid_indices.push_back(static_cast<int>(k));
    est.peak_values.push_back(v[k]);
  }
  return est;
}

EstimatorResult gca_music(std::span<const SubspaceDecomposition> subspaces, int sources,
                          const SearchOptions& options) {
  check_subspaces(subspaces, sources);
  SpectrumGrid spectrum = make_grid(options.grid_size);
  const CMatrix steering = virtual_steering_grid(subspaces.front().dimension(), spectrum.grid);
  // Block-diagonal I - P: the merged quadratic form is the sum of the blocks.
  RVector den = RVector::Zero(steering.cols());
  for (const auto& s : subspaces) den += null_spectrum_denominator(s.signal_basis, steering);
  for (Eigen::Index k = 0; k < den.size(); ++k) {
    spectrum.values[static_cast<std::size_t>(k)] = 1.0 / std::max(den(k), kDenominatorFloor);
  }
  EstimatorResult out{std::move(spectrum), {}};
  out.estimate = find_peaks(out.spectrum, sources, options.peaks);
  out.estimate.algorithm = Algorithm::Gca;
  out.estimate.eigen_gaps = eigen_gaps(subspaces, sources);
  return out;
}

EstimatorResult avca_music(std::span<const SubspaceDecomposition> subspaces, int sources,
                           const SearchOptions& options) {
  check_subspaces(subspaces, sources);
  SpectrumGrid spectrum = make_grid(options.grid_size);
  const CMatrix steering = virtual_steering_grid(subspaces.front().dimension(), spectrum.grid);
  RVector acc = RVector::Zero(steering.cols());
  for (const auto& s : subspaces) {
    acc += null_spectrum_denominator(s.signal_basis, steering).cwiseInverse();
  }
  acc /= static_cast<double>(subspaces.size());
  for (Eigen::Index k = 0; k < acc.size(); ++k) spectrum.values[static_cast<std::size_t>(k)] = acc(k);
  EstimatorResult out{std::move(spectrum), {}};
  out.estimate = find_peaks(out.spectrum, sources, options.peaks);
  out.estimate.algorithm = Algorithm::Avca;
  out.estimate.eigen_gaps = eigen_gaps(subspaces, sources);
  return out;
}

EstimatorResult g_music(std::span<const CMatrix> covariances, const TypeIILayout& layout,
                        int sources, const SearchOptions& options) {
  if (static_cast<int>(covariances.size()) != layout.subarrays) {
    throw InvalidArgument("expected one covariance per subarray");
  }
  const auto n = static_cast<Eigen::Index>(layout.base.size());
  if (sources < 1) throw InvalidArgument("source count must be >= 1");
  if (sources >= n) {
    throw TooManySources("G-MUSIC identifies at most " + std::to_string(n - 1) +
                         " sources with " + std::to_string(n) + " sensors per subarray");
  }
  std::vector<SubspaceDecomposition> subspaces;
  subspaces.reserve(covariances.size());
  for (const auto& r : covariances) {
    if (r.rows() != n || r.cols() != n) {
      throw InvalidArgument("covariance size does not match the subarray sensor count");
    }
    subspaces.push_back(signal_subspace(r, sources));
  }

  SpectrumGrid spectrum = make_grid(options.grid_size);
  RVector den = RVector::Zero(static_cast<Eigen::Index>(spectrum.size()));
  CMatrix steering(n, static_cast<Eigen::Index>(spectrum.size()));
  for (int l = 0; l < layout.subarrays; ++l) {
    const auto positions = layout.subarray_positions(l);
    for (std::size_t g = 0; g < spectrum.size(); ++g) {
      for (Eigen::Index i = 0; i < n; ++i) {
        steering(i, static_cast<Eigen::Index>(g)) =
            std::polar(1.0, kPi * positions[static_cast<std::size_t>(i)] * spectrum.grid[g]);
      }
    }
    den += null_spectrum_denominator(subspaces[static_cast<std::size_t>(l)].signal_basis, steering);
  }
  for (Eigen::Index k = 0; k < den.size(); ++k) {
    spectrum.values[static_cast<std::size_t>(k)] = 1.0 / std::max(den(k), kDenominatorFloor);
  }
  EstimatorResult out{std::move(spectrum), {}};
  out.estimate = find_peaks(out.spectrum, sources, options.peaks);
  out.estimate.algorithm = Algorithm::GMusic;
  out.estimate.eigen_gaps = eigen_gaps(subspaces, sources);
  return out;
}

} // namespace gcamusic
