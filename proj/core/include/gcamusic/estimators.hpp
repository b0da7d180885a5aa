// SPDX-License-Identifier: Apache-2.0
//
// Grid-search DOA estimators over per-subarray subspaces:
//   GCA-MUSIC  - coarray subspaces merged through a block-diagonal projector
//   G-MUSIC    - physical-domain subspaces merged the same way
//   AVCA-MUSIC - per-subarray coarray MUSIC spectra averaged
// plus the shared peak picker.

#pragma once

#include <gcamusic/coarray.hpp>
#include <gcamusic/geometry.hpp>
#include <gcamusic/types.hpp>

#include <span>
#include <string_view>
#include <vector>

namespace gcamusic {

enum class Algorithm { Gca, GMusic, Avca };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

inline constexpr int kDefaultGridSize = 2001;
inline constexpr double kDenominatorFloor = 1e-30;

struct SpectrumGrid {
  std::vector<double> grid;    // theta_k = -1 + 2k/G
  std::vector<double> values;  // pseudo-spectrum, >= 0

  std::size_t size() const noexcept { return grid.size(); }
  double step() const noexcept { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
};

SpectrumGrid make_grid(int size);

struct PeakOptions {
  bool refine = true;  // three-point parabolic fit on the dB spectrum
};

struct DoaEstimate {
  std::vector<double> thetas;          // ascending
  std::vector<int> grid_indices;       // grid point behind each theta
  std::vector<double> peak_values;
  std::vector<double> eigen_gaps;      // beta_D - beta_{D+1} per subarray
  Algorithm algorithm = Algorithm::Gca;
  bool degraded_peaks = false;         // fewer than D local maxima were found
};

struct EstimatorResult {
  SpectrumGrid spectrum;
  DoaEstimate estimate;
};

struct SearchOptions {
  int grid_size = kDefaultGridSize;
  PeakOptions peaks;
};

/// Dense P = blkdiag(U_1 U_1^H, ..., U_L U_L^H) and Q = I - P. The estimators
/// never form this; it exists for inspection and tests.
struct MergedProjector {
  CMatrix projector;
  CMatrix complement;
};
MergedProjector merged_projector(std::span<const CMatrix> signal_bases);

/// a^H (I - U U^H) a for every column a of `steering`, floored at
/// kDenominatorFloor.
RVector null_spectrum_denominator(const CMatrix& signal_basis, const CMatrix& steering);

/// Virtual steering vectors at positions 0..M-1 for every grid point (M x G).
CMatrix virtual_steering_grid(int window, std::span<const double> grid);

DoaEstimate find_peaks(const SpectrumGrid& spectrum, int sources,
                       PeakOptions options = {});

EstimatorResult gca_music(std::span<const SubspaceDecomposition> subspaces, int sources,
                          const SearchOptions& options = {});

EstimatorResult avca_music(std::span<const SubspaceDecomposition> subspaces, int sources,
                           const SearchOptions& options = {});

/// covariances[l] is the N x N covariance of subarray l of `layout`.
EstimatorResult g_music(std::span<const CMatrix> covariances, const TypeIILayout& layout,
                        int sources, const SearchOptions& options = {});

} // namespace gcamusic
