#include "eikmeans/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "eikmeans/error.hpp"

namespace eikmeans {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(Errc::invalid_argument, std::string(what) + " contains non-finite values");
  }
}

}  // namespace

SampleMatrix::SampleMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(Errc::invalid_argument, "sample matrix must have at least one row and one column");
  }
  require_finite(values_, "sample matrix");
}

SampleMatrix SampleMatrix::from_row_major(std::span<const double> values, std::size_t n,
                                          std::size_t d) {
  if (values.size() != n * d) {
    throw Error(Errc::invalid_argument, "row-major buffer size does not match n*d");
  }
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::copy(values.begin(), values.end(), m.data());
  return SampleMatrix(std::move(m));
}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(Errc::invalid_argument, "sample matrix must have at least one row and one column");
  }
  const std::size_t d = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw Error(Errc::invalid_argument, "ragged rows: row " + std::to_string(i) + " has " +
                                              std::to_string(rows[i].size()) + " columns, expected " +
                                              std::to_string(d));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.data() + i * d);
  }
  return SampleMatrix(std::move(m));
}

SampleMatrix SampleMatrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix m(static_cast<Eigen::Index>(indices.size()), values_.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = values_.row(static_cast<Eigen::Index>(indices[i]));
  }
  return SampleMatrix(std::move(m));
}

CentroidSet::CentroidSet(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw Error(Errc::invalid_argument, "centroid set must hold at least one centroid");
  }
  require_finite(values_, "centroid set");
}

bool CentroidSet::distinct() const {
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < values_.rows(); ++j) {
      if (values_.row(i) == values_.row(j)) return false;
    }
  }
  return true;
}

Matrix pairwise_distance(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw Error(Errc::dimension_mismatch, "pairwise_distance: dimension mismatch (" +
                                              std::to_string(a.cols()) + " vs " +
                                              std::to_string(b.cols()) + ")");
  }
  const auto d = static_cast<std::size_t>(a.cols());
  Matrix out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      out(i, j) = euclidean(a.data() + i * a.cols(), b.data() + j * b.cols(), d);
    }
  }
  return out;
}

Matrix pairwise_distance(const SampleMatrix& a, const SampleMatrix& b) {
  return pairwise_distance(a.values(), b.values());
}

Vector nn_distances(const SampleMatrix& data) {
  const std::size_t n = data.n();
  if (n < 2) {
    throw Error(Errc::invalid_argument, "nn_distances needs at least two samples");
  }
  Vector best(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = squared_euclidean(data.row(i), data.row(j), data.d());
      best[i] = std::min(best[i], dist);
      best[j] = std::min(best[j], dist);
    }
  }
  // sqrt is monotone and correctly rounded, so sqrt(min) == min(sqrt).
  for (double& b : best) b = std::sqrt(b);
  return best;
}

std::vector<std::size_t> knn_indices(std::size_t anchor, const SampleMatrix& data, std::size_t k) {
  const std::size_t n = data.n();
  if (anchor >= n) {
    throw Error(Errc::invalid_argument, "knn_indices: anchor index out of range");
  }
  if (k < 1 || k > n) {
    throw Error(Errc::invalid_argument, "knn_indices: k must lie in [1, n]");
  }
  std::vector<std::pair<double, std::size_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) {
    keyed[i] = {euclidean(data.row(anchor), data.row(i), data.d()), i};
  }
  // The anchor sits at distance 0; any duplicate with a lower index would tie
  // with it, so pin the anchor first explicitly.
  keyed[anchor].first = -1.0;
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = keyed[i].second;
  return out;
}

LabelVector nearest_centroid(const SampleMatrix& data, const CentroidSet& centroids) {
  if (data.d() != centroids.d()) {
    throw Error(Errc::dimension_mismatch, "nearest_centroid: dimension mismatch");
  }
  LabelVector labels(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroids.k(); ++k) {
      const double dist = euclidean(data.row(i), centroids.row(k), data.d());
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    labels[i] = best;
  }
  return labels;
}

Counts bin_counts(std::span<const std::size_t> labels, std::size_t k) {
  Counts counts(k, 0);
  for (const std::size_t label : labels) {
    if (label >= k) {
      throw Error(Errc::invalid_argument, "label out of range");
    }
    ++counts[label];
  }
  return counts;
}

}  // namespace eikmeans
