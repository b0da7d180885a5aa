// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/geometry.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <mutex>
#include <string>

namespace gcamusic {

ArrayGeometry ArrayGeometry::from_positions(std::vector<int> positions) {
  if (positions.empty()) {
    throw InvalidArgument("array geometry needs at least one sensor");
  }
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end()) {
    throw InvalidArgument("array geometry has duplicate sensor positions");
  }
  const int origin = positions.front();
  for (int& p : positions) p -= origin;
  return ArrayGeometry(std::move(positions));
}

int CoarrayProfile::weight(int lag) const {
  const auto it = weights.find(lag);
  return it == weights.end() ? 0 : it->second;
}

std::vector<int> TypeIILayout::subarray_positions(int l) const {
  if (l < 0 || l >= subarrays) {
    throw InvalidArgument("subarray index out of range");
  }
  std::vector<int> out(base.positions().begin(), base.positions().end());
  for (int& p : out) p += offsets[static_cast<std::size_t>(l)];
  return out;
}

ArrayGeometry build_ula(int n) {
  if (n < 1) throw InvalidArgument("ULA needs n >= 1");
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  return ArrayGeometry::from_positions(std::move(p));
}

ArrayGeometry build_nested2(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw InvalidArgument("nested array needs n1, n2 >= 1");
  std::vector<int> p;
  p.reserve(static_cast<std::size_t>(n1 + n2));
  for (int i = 0; i < n1; ++i) p.push_back(i);
  for (int k = 1; k <= n2; ++k) p.push_back(k * (n1 + 1) - 1);
  return ArrayGeometry::from_positions(std::move(p));
}

ArrayGeometry build_super_nested2(int n1, int n2) {
  if (n1 < 3 || n2 < 2) {
    throw InvalidArgument("second-order super nested array needs n1 >= 3 and n2 >= 2");
  }
  // Dense level split into four sparse runs; (a1, b1, a2, b2) depend on n1 mod 4.
  const int r = n1 / 4;
  int a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  switch (n1 % 4) {
  case 0: a1 = r;     b1 = r - 1; a2 = r - 1; b2 = r - 2; break;
  case 1: a1 = r;     b1 = r - 1; a2 = r;     b2 = r - 2; break;
  case 2: a1 = r + 1; b1 = r - 1; a2 = r;     b2 = r - 2; break;
  case 3: a1 = r;     b1 = r;     a2 = r;     b2 = r - 1; break;
  }
  const int period = n1 + 1;
  std::vector<int> p;  // 1-based positions
  for (int l = 0; l <= a1; ++l) p.push_back(1 + 2 * l);
  for (int l = 0; l <= b1; ++l) p.push_back(period - (1 + 2 * l));
  for (int l = 0; l <= a2; ++l) p.push_back(period + (2 + 2 * l));
  for (int l = 0; l <= b2; ++l) p.push_back(2 * period - (2 + 2 * l));
  for (int l = 2; l <= n2; ++l) p.push_back(l * period);
  p.push_back(n2 * period - 1);
  return ArrayGeometry::from_positions(std::move(p));
}

namespace {

// Depth-first search over interior positions in ascending order, so the first
// hit is the lexicographically smallest set with the given aperture.
class MraSearch {
public:
  MraSearch(int sensors, int aperture) : sensors_(sensors), aperture_(aperture) {
    full_ = (aperture_ >= 63) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (aperture_ + 1)) - 2);
  }

  bool run(std::vector<int>& out) {
    placed_ = {0, aperture_};
    if (!descend(1, std::uint64_t{1} << aperture_)) return false;
    out = placed_;
    std::sort(out.begin(), out.end());
    return true;
  }

private:
  bool descend(int next, std::uint64_t covered) {
    const int remaining = sensors_ - static_cast<int>(placed_.size());
    if (remaining == 0) return covered == full_;
    const int missing = std::popcount(full_ & ~covered);
    const int have = static_cast<int>(placed_.size());
    // Each new sensor adds at most one new lag per sensor already present.
    const int reachable = remaining * have + remaining * (remaining - 1) / 2;
    if (missing > reachable) return false;
    for (int q = next; q <= aperture_ - remaining; ++q) {
      std::uint64_t add = 0;
      for (int p : placed_) add |= std::uint64_t{1} << (p > q ? p - q : q - p);
      placed_.push_back(q);
      if (descend(q + 1, covered | add)) return true;
      placed_.pop_back();
    }
    return false;
  }

  int sensors_;
  int aperture_;
  std::uint64_t full_ = 0;
  std::vector<int> placed_;
};

} // namespace

ArrayGeometry build_mra(int n) {
  if (n < 1) throw InvalidArgument("MRA needs n >= 1");
  if (n > kMaxMraSensors) {
    throw Unsupported("MRA search supports at most " + std::to_string(kMaxMraSensors) +
                      " sensors");
  }
  static std::mutex cache_mutex;
  static std::map<int, ArrayGeometry> cache;
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  // n(n-1)/2 distinct positive differences at most, so that bounds the aperture;
  // the ULA (aperture n-1) always succeeds.
  std::vector<int> best{0};
  if (n >= 2) {
    for (int aperture = n * (n - 1) / 2; aperture >= n - 1; --aperture) {
      MraSearch search(n, aperture);
      if (search.run(best)) break;
    }
  }
  auto geom = ArrayGeometry::from_positions(std::move(best));
  std::lock_guard lock(cache_mutex);
  cache.emplace(n, geom);
  return geom;
}

CoarrayProfile difference_coarray(std::span<const int> positions) {
  CoarrayProfile out;
  for (int m : positions) {
    for (int n : positions) ++out.weights[m - n];
  }
  out.lags.reserve(out.weights.size());
  for (const auto& [lag, w] : out.weights) out.lags.push_back(lag);
  int k = 0;
  while (out.weights.contains(k + 1) && out.weights.contains(-(k + 1))) ++k;
  out.contiguous_half = out.weights.contains(0) ? k : -1;
  return out;
}

Type2Composition compose_type2(const ArrayGeometry& base, int subarrays, int mu) {
  if (subarrays < 1) throw InvalidArgument("Type-II layout needs at least one subarray");
  if (mu < 1) throw InvalidArgument("inter-subarray spacing mu must be >= 1");
  TypeIILayout layout{base, subarrays, mu, {}};
  const int stride = base.aperture() + mu;
  std::vector<int> all;
  for (int l = 0; l < subarrays; ++l) {
    layout.offsets.push_back(l * stride);
    for (int p : base.positions()) all.push_back(l * stride + p);
  }
  auto whole = ArrayGeometry::from_positions(std::move(all));
  const int dof = static_cast<int>(difference_coarray(whole).sdof());
  return {std::move(layout), std::move(whole), dof};
}

int dof_bound(int subarrays, int sdof, int mu, int kappa) {
  if (subarrays < 1 || sdof < 1 || mu < 1 || kappa < 0) {
    throw InvalidArgument("dof_bound inputs must be positive");
  }
  if (sdof % 2 == 0) throw InvalidArgument("sDoF of a difference coarray is odd");
  if (mu > kappa) return (2 * subarrays - 1) * sdof;
  return subarrays * (sdof - 1) + 2 * (subarrays - 1) * mu + 1;
}

} // namespace gcamusic
