// SPDX-License-Identifier: Apache-2.0
//
// Covariance -> difference-coarray signal -> spatially smoothed covariance ->
// signal/noise subspaces, one subarray at a time.

#pragma once

#include <gcamusic/geometry.hpp>
#include <gcamusic/types.hpp>

#include <span>
#include <string_view>
#include <vector>

namespace gcamusic {

enum class DedupRule {
  Average,          // mean over every sensor pair sharing a lag
  FirstOccurrence,  // first pair in column-major vec(R) order
};

DedupRule parse_dedup_rule(std::string_view name);
std::string_view to_string(DedupRule rule);

struct CoarraySignal {
  std::vector<int> lags;  // sorted ascending
  CVector values;         // one entry per lag
  DedupRule rule = DedupRule::Average;

  /// Largest k such that every lag in {-k..k} is present.
  int contiguous_half() const;
  /// Value at a lag that must exist.
  Complex at(int lag) const;
};

struct SmoothedCovariance {
  CMatrix matrix;         // M x M Hermitian PSD
  int window = 0;         // M
  int subarray_index = 0;
};

struct SubspaceDecomposition {
  CMatrix signal_basis;   // M x D
  CMatrix noise_basis;    // M x (M - D)
  RVector eigenvalues;    // descending

  int dimension() const noexcept { return static_cast<int>(eigenvalues.size()); }
  int sources() const noexcept { return static_cast<int>(signal_basis.cols()); }
};

/// Maps R[i, j] to lag positions[i] - positions[j] and collapses duplicates.
/// positions need not be sorted; the result is always lag-sorted.
CoarraySignal covariance_to_coarray(const CMatrix& covariance,
                                    std::span<const int> positions,
                                    DedupRule rule = DedupRule::Average);
inline CoarraySignal covariance_to_coarray(const CMatrix& covariance,
                                           const ArrayGeometry& geom,
                                           DedupRule rule = DedupRule::Average) {
  return covariance_to_coarray(covariance, geom.positions(), rule);
}

/// Forward spatial smoothing over the contiguous center {-k..k}: M = k + 1
/// windows of length M. Window i (1-based) spans lags k-i+1-(M-1) .. k-i+1,
/// ascending, so element m lines up with virtual position m of a_v(theta).
SmoothedCovariance spatial_smooth(const CoarraySignal& signal, int subarray_index = 0);

/// Hermitian EVD, eigenvalues descending. Each eigenvector's first component
/// with magnitude above 1e-12 is rotated to be real and positive.
void hermitian_eigen(const CMatrix& matrix, RVector& eigenvalues, CMatrix& eigenvectors);

/// Splits the top `sources` eigenvectors from the rest.
SubspaceDecomposition signal_subspace(const CMatrix& matrix, int sources);
inline SubspaceDecomposition signal_subspace(const SmoothedCovariance& rss, int sources) {
  return signal_subspace(rss.matrix, sources);
}

} // namespace gcamusic
