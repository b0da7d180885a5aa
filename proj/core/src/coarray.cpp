// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/coarray.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace gcamusic {

DedupRule parse_dedup_rule(std::string_view name) {
  if (name == "average") return DedupRule::Average;
  if (name == "first" || name == "first-occurrence" || name == "first_occurrence") {
    return DedupRule::FirstOccurrence;
  }
  throw InvalidArgument("unknown dedup rule '" + std::string(name) + "'");
}

std::string_view to_string(DedupRule rule) {
  return rule == DedupRule::Average ? "average" : "first-occurrence";
}

int CoarraySignal::contiguous_half() const {
  const auto has = [this](int lag) { return std::binary_search(lags.begin(), lags.end(), lag); };
  if (!has(0)) return -1;
  int k = 0;
  while (has(k + 1) && has(-(k + 1))) ++k;
  return k;
}

Complex CoarraySignal::at(int lag) const {
  const auto it = std::lower_bound(lags.begin(), lags.end(), lag);
  if (it == lags.end() || *it != lag) {
    throw InvalidArgument("lag " + std::to_string(lag) + " is not in the coarray");
  }
  return values(it - lags.begin());
}

CoarraySignal covariance_to_coarray(const CMatrix& covariance, std::span<const int> positions,
                                    DedupRule rule) {
  const auto n = static_cast<Eigen::Index>(positions.size());
  if (n == 0 || covariance.rows() != n || covariance.cols() != n) {
    throw InvalidArgument("covariance dimensions do not match the sensor positions");
  }
  struct Accum {
    Complex sum{0.0, 0.0};
    int count = 0;
  };
  std::map<int, Accum> by_lag;
  // vec(R) is column-major: column j outer, row i inner. R[i, j] sits at lag p_i - p_j.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const int lag = positions[static_cast<std::size_t>(i)] - positions[static_cast<std::size_t>(j)];
      Accum& acc = by_lag[lag];
      if (rule == DedupRule::FirstOccurrence && acc.count > 0) continue;
      acc.sum += covariance(i, j);
      ++acc.count;
    }
  }
  CoarraySignal out;
  out.rule = rule;
  out.lags.reserve(by_lag.size());
  out.values.resize(static_cast<Eigen::Index>(by_lag.size()));
  Eigen::Index k = 0;
  for (const auto& [lag, acc] : by_lag) {
    out.lags.push_back(lag);
    out.values(k++) = acc.sum / static_cast<double>(acc.count);
  }
  return out;
}

SmoothedCovariance spatial_smooth(const CoarraySignal& signal, int subarray_index) {
  const int half = signal.contiguous_half();
  if (half < 1) {
    throw DegenerateCoarray("spatial smoothing needs a contiguous coarray center of at least "
                            "{-1, 0, 1}");
  }
  const int window = half + 1;
  // Contiguous center as a dense vector indexed by lag + half.
  CVector center(2 * half + 1);
  for (int lag = -half; lag <= half; ++lag) center(lag + half) = signal.at(lag);

  CMatrix acc = CMatrix::Zero(window, window);
  for (int i = 1; i <= window; ++i) {
    const int first_lag = half - i + 1 - (window - 1);
    const auto segment = center.segment(first_lag + half, window);
    acc.noalias() += segment * segment.adjoint();
  }
  acc /= static_cast<double>(window);
  return {(0.5 * (acc + acc.adjoint())).eval(), window, subarray_index};
}

void hermitian_eigen(const CMatrix& matrix, RVector& eigenvalues, CMatrix& eigenvectors) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw InvalidArgument("eigendecomposition needs a non-empty square matrix");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition did not converge");
  }
  const Eigen::Index m = matrix.rows();
  eigenvalues = solver.eigenvalues().reverse();
  eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index r = 0; r < m; ++r) {
      const Complex v = eigenvectors(r, c);
      if (std::abs(v) > 1e-12) {
        eigenvectors.col(c) *= std::conj(v) / std::abs(v);
        eigenvectors(r, c) = Complex(std::abs(eigenvectors(r, c)), 0.0);
        break;
      }
    }
  }
}

SubspaceDecomposition signal_subspace(const CMatrix& matrix, int sources) {
  if (sources < 1) throw InvalidArgument("source count must be >= 1");
  if (sources >= matrix.rows()) {
    throw TooManySources("cannot separate " + std::to_string(sources) +
                         " sources in a " + std::to_string(matrix.rows()) +
                         "-dimensional space (limit " + std::to_string(matrix.rows() - 1) + ")");
  }
  SubspaceDecomposition out;
  CMatrix vectors;
  hermitian_eigen(matrix, out.eigenvalues, vectors);
  out.signal_basis = vectors.leftCols(sources);
  out.noise_basis = vectors.rightCols(matrix.rows() - sources);
  return out;
}

} // namespace gcamusic
