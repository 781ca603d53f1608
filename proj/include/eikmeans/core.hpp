#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace eikmeans {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = std::vector<double>;
using Counts = std::vector<std::size_t>;
using LabelVector = std::vector<std::size_t>;

/// n x d matrix of observations, one sample per row. Always non-empty and finite.
class SampleMatrix {
 public:
  explicit SampleMatrix(Matrix values);

  /// Builds a matrix from row-major storage of n*d doubles.
  static SampleMatrix from_row_major(std::span<const double> values, std::size_t n, std::size_t d);
  static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& values() const noexcept { return values_; }
  const double* row(std::size_t i) const noexcept { return values_.data() + i * d(); }

  /// Rows at the given indices, in the given order.
  SampleMatrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const SampleMatrix& a, const SampleMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Matrix values_;
};

/// K x d centroid matrix. K >= 1, finite.
class CentroidSet {
 public:
  explicit CentroidSet(Matrix values);

  std::size_t k() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t d() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Matrix& values() const noexcept { return values_; }
  const double* row(std::size_t i) const noexcept { return values_.data() + i * d(); }

  /// True when no two centroids are identical.
  bool distinct() const;

  friend bool operator==(const CentroidSet& a, const CentroidSet& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Matrix values_;
};

/// Squared Euclidean distance between two length-d points.
inline double squared_euclidean(const double* a, const double* b, std::size_t d) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

/// Euclidean distance. Every distance in the library goes through this
/// function (or its square above) so that ties compare identically.
inline double euclidean(const double* a, const double* b, std::size_t d) noexcept {
  return std::sqrt(squared_euclidean(a, b, d));
}

/// |A| x |B| Euclidean distance matrix.
Matrix pairwise_distance(const Matrix& a, const Matrix& b);
Matrix pairwise_distance(const SampleMatrix& a, const SampleMatrix& b);

/// Distance from every sample to its nearest other sample. Requires n >= 2.
Vector nn_distances(const SampleMatrix& data);

/// Indices of the k samples closest to `anchor` (anchor included, first).
/// Ties are broken by lower index.
std::vector<std::size_t> knn_indices(std::size_t anchor, const SampleMatrix& data, std::size_t k);

/// Index of the centroid nearest to each sample; ties go to the lowest index.
LabelVector nearest_centroid(const SampleMatrix& data, const CentroidSet& centroids);

/// Histogram of labels over [0, k).
Counts bin_counts(std::span<const std::size_t> labels, std::size_t k);

}  // namespace eikmeans
