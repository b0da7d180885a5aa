// SPDX-License-Identifier: Apache-2.0
//
// Sparse linear array geometries, difference coarrays and Type-II
// multi-subarray composition. Positions are integers in units of the
// minimum inter-sensor spacing d.

#pragma once

#include <gcamusic/types.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace gcamusic {

/// Sorted, unique, non-negative sensor positions with positions[0] == 0.
class ArrayGeometry {
public:
  /// Single sensor at the origin.
  ArrayGeometry() : positions_{0} {}

  /// Validates and canonicalizes: sorts, rejects duplicates, shifts so the
  /// first sensor sits at 0.
  static ArrayGeometry from_positions(std::vector<int> positions);

  std::span<const int> positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  int aperture() const noexcept { return positions_.back(); }

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

private:
  explicit ArrayGeometry(std::vector<int> p) : positions_(std::move(p)) {}
  std::vector<int> positions_;
};

struct CoarrayProfile {
  std::vector<int> lags;          // sorted ascending, symmetric about 0
  std::map<int, int> weights;     // lag -> number of sensor pairs
  int contiguous_half = 0;        // largest k with {-k..k} inside lags

  std::size_t sdof() const noexcept { return lags.size(); }
  int weight(int lag) const;
  bool hole_free() const noexcept {
    return static_cast<int>(lags.size()) == 2 * contiguous_half + 1;
  }
};

struct TypeIILayout {
  ArrayGeometry base;
  int subarrays = 1;            // L
  int mu = 1;                   // normalized gap between adjacent subarrays
  std::vector<int> offsets;     // offset_l = l * (aperture + mu), l = 0..L-1

  /// Absolute sensor positions of subarray l.
  std::vector<int> subarray_positions(int l) const;
};

struct Type2Composition {
  TypeIILayout layout;
  ArrayGeometry whole;
  int whole_dof = 0;            // |difference coarray of whole|
};

ArrayGeometry build_ula(int n);

/// Two-level nested array: dense level {0..n1-1} and outer level
/// {k(n1+1)-1 : k=1..n2}.
ArrayGeometry build_nested2(int n1, int n2);

/// Second-order super nested array with the same coarray as
/// build_nested2(n1, n2) and a thinner dense segment. Requires n1 >= 3, n2 >= 2.
ArrayGeometry build_super_nested2(int n1, int n2);

/// Minimum redundancy array: the largest aperture an n-sensor array can have
/// while keeping a hole-free coarray. Found by exhaustive search; among
/// arrays with that aperture the lexicographically smallest wins.
ArrayGeometry build_mra(int n);
inline constexpr int kMaxMraSensors = 10;

CoarrayProfile difference_coarray(std::span<const int> positions);
inline CoarrayProfile difference_coarray(const ArrayGeometry& geom) {
  return difference_coarray(geom.positions());
}

Type2Composition compose_type2(const ArrayGeometry& base, int subarrays, int mu);

/// Whole-array DoF of a Type-II layout with hole-free subarray coarrays:
/// L(sDoF-1) + 2(L-1)mu + 1 when mu <= kappa, (2L-1)sDoF otherwise.
int dof_bound(int subarrays, int sdof, int mu, int kappa);

} // namespace gcamusic
