#include "eikmeans/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "eikmeans/error.hpp"
#include "eikmeans/greedy_init.hpp"
#include "eikmeans/rng.hpp"

namespace eikmeans {

namespace {

LabelVector nearest_rows(const SampleMatrix& data, const Matrix& centroids) {
  const std::size_t d = data.d();
  const auto k = static_cast<std::size_t>(centroids.rows());
  LabelVector labels(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double dist = squared_euclidean(data.row(i), centroids.data() + c * d, d);
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    labels[i] = best;
  }
  return labels;
}

// Moves the sample farthest from its own centroid into each empty cluster.
void reseed_empty(const SampleMatrix& data, const Matrix& centroids, LabelVector& labels,
                  Counts& counts) {
  const std::size_t d = data.d();
  std::vector<bool> used(data.n(), false);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] != 0) continue;
    std::size_t pick = data.n();
    double far = -1.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
      if (used[i] || counts[labels[i]] <= 1) continue;
      const double dist = euclidean(data.row(i), centroids.data() + labels[i] * d, d);
      if (dist > far) {
        far = dist;
        pick = i;
      }
    }
    if (pick == data.n()) continue;
    used[pick] = true;
    --counts[labels[pick]];
    labels[pick] = c;
    counts[c] = 1;
  }
}

Matrix group_means(const SampleMatrix& data, const LabelVector& labels, const Counts& counts,
                   const Matrix& previous) {
  Matrix means = Matrix::Zero(previous.rows(), previous.cols());
  const std::size_t d = data.d();
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      means(static_cast<Eigen::Index>(labels[i]), static_cast<Eigen::Index>(j)) += data.row(i)[j];
    }
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const auto row = static_cast<Eigen::Index>(c);
    if (counts[c] == 0) {
      means.row(row) = previous.row(row);
    } else {
      means.row(row) /= static_cast<double>(counts[c]);
    }
  }
  return means;
}

std::size_t min_count(const Counts& counts) { return *std::min_element(counts.begin(), counts.end()); }

}  // namespace

KMeansResult lloyd_kmeans(const SampleMatrix& data, const CentroidSet& init, std::size_t max_iter,
                          double tol) {
  if (init.d() != data.d()) {
    throw Error(Errc::dimension_mismatch, "lloyd_kmeans: centroid dimension " + std::to_string(init.d()) +
                                              " does not match data dimension " + std::to_string(data.d()));
  }
  if (init.k() > data.n()) {
    throw Error(Errc::invalid_argument, "lloyd_kmeans: more centroids than samples");
  }
  if (max_iter < 1 || !(tol >= 0.0)) {
    throw Error(Errc::invalid_argument, "lloyd_kmeans: need max_iter >= 1 and tol >= 0");
  }

  Matrix centroids = init.values();
  const std::size_t k = init.k();
  std::size_t iterations = 0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    LabelVector labels = nearest_rows(data, centroids);
    Counts counts = bin_counts(labels, k);
    reseed_empty(data, centroids, labels, counts);
    Matrix updated = group_means(data, labels, counts, centroids);

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      shift = std::max(shift, euclidean(centroids.data() + c * data.d(), updated.data() + c * data.d(), data.d()));
    }
    centroids = std::move(updated);
    iterations = it;
    if (shift <= tol) break;
  }
  LabelVector labels = nearest_rows(data, centroids);
  return {CentroidSet(std::move(centroids)), std::move(labels), iterations};
}

Vector intensity_vector(std::span<const std::size_t> counts, std::span<const std::size_t> expected) {
  if (counts.size() != expected.size()) {
    throw Error(Errc::invalid_argument, "intensity_vector: length mismatch");
  }
  Vector ratio(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (expected[k] == 0) {
      throw Error(Errc::invalid_argument, "intensity_vector: expected count must be positive");
    }
    ratio[k] = static_cast<double>(counts[k]) / static_cast<double>(expected[k]);
  }
  return ratio;
}

Vector amplify_coefficients(std::span<const double> intensity, double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw Error(Errc::invalid_argument, "amplify_coefficients: theta must be finite and >= 0");
  }
  Vector coe(intensity.size());
  for (std::size_t k = 0; k < intensity.size(); ++k) {
    if (!std::isfinite(intensity[k])) {
      throw Error(Errc::invalid_argument, "amplify_coefficients: non-finite intensity");
    }
    coe[k] = std::exp(theta * (intensity[k] - 1.0));
  }
  return coe;
}

LabelVector amplified_assign(const SampleMatrix& data, const CentroidSet& centroids,
                             std::span<const double> coefficients) {
  if (coefficients.size() != centroids.k()) {
    throw Error(Errc::invalid_argument, "amplified_assign: " + std::to_string(coefficients.size()) +
                                            " coefficients for " + std::to_string(centroids.k()) +
                                            " centroids");
  }
  if (data.d() != centroids.d()) {
    throw Error(Errc::dimension_mismatch, "amplified_assign: data has " + std::to_string(data.d()) +
                                              " columns, centroids have " + std::to_string(centroids.d()));
  }
  for (const double c : coefficients) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error(Errc::invalid_argument, "amplified_assign: coefficients must be positive and finite");
    }
  }
  LabelVector labels(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroids.k(); ++k) {
      const double dist = coefficients[k] * euclidean(data.row(i), centroids.row(k), data.d());
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    labels[i] = best;
  }
  return labels;
}

double intensity_stddev(std::span<const std::size_t> counts, std::size_t n) {
  if (counts.empty() || n == 0) {
    throw Error(Errc::invalid_argument, "intensity_stddev: empty counts");
  }
  const double total = static_cast<double>(n);
  double mean = 0.0;
  for (const std::size_t c : counts) mean += static_cast<double>(c) / total;
  mean /= static_cast<double>(counts.size());
  double var = 0.0;
  for (const std::size_t c : counts) {
    const double r = static_cast<double>(c) / total - mean;
    var += r * r;
  }
  return std::sqrt(var / static_cast<double>(counts.size()));
}

Vector theta_grid(double max, double step) {
  if (!(max >= 0.0) || !(step > 0.0) || !std::isfinite(max) || !std::isfinite(step)) {
    throw Error(Errc::invalid_argument, "theta grid needs max >= 0 and step > 0");
  }
  const auto steps = static_cast<std::size_t>(std::floor(max / step + 1e-9));
  Vector grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) grid[i] = static_cast<double>(i) * step;
  return grid;
}

LabelVector PartitionModel::assign(const SampleMatrix& data) const {
  return amplified_assign(data, centroids, coefficients);
}

AmplifyResult amplify_shrink(const SampleMatrix& data, const KMeansResult& clusters, std::size_t beta,
                             std::span<const double> grid) {
  if (grid.empty()) {
    throw Error(Errc::invalid_argument, "theta grid must not be empty");
  }
  const std::size_t k = clusters.centroids.k();
  const Vector ratio = intensity_vector(bin_counts(clusters.labels, k), partition_sizes(data.n(), k));

  // Same products as amplified_assign, with the distances computed once.
  const Matrix dist = pairwise_distance(data.values(), clusters.centroids.values());
  AmplifyResult result;
  for (const double theta : grid) {
    result.coefficients = amplify_coefficients(ratio, theta);
    result.counts.assign(k, 0);
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
      std::size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double v = result.coefficients[c] * dist(i, static_cast<Eigen::Index>(c));
        if (v < best_dist) {
          best_dist = v;
          best = c;
        }
      }
      ++result.counts[best];
    }
    result.theta = theta;
    if (min_count(result.counts) >= beta) {
      result.satisfied = true;
      break;
    }
  }
  return result;
}

SampleMatrix subsample(const SampleMatrix& data, std::size_t count, std::uint64_t seed) {
  if (count == 0 || count > data.n()) {
    throw Error(Errc::invalid_argument, "subsample: count must lie in [1, n]");
  }
  std::vector<std::size_t> idx(data.n());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(idx[i], idx[i + rng.below(data.n() - i)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return data.select_rows(idx);
}

CentroidSet random_centroids(const SampleMatrix& data, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > data.n()) {
    throw Error(Errc::invalid_argument, "random_centroids: need 1 <= K <= n");
  }
  std::vector<std::size_t> idx(data.n());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.below(data.n() - i)]);
  }
  idx.resize(k);
  return CentroidSet(data.select_rows(idx).values());
}

PartitionModel fit_partition(const SampleMatrix& full, const FitOptions& options) {
  if (options.beta < 1) {
    throw Error(Errc::invalid_argument, "beta must be >= 1");
  }
  if (options.theta_grid.empty() || options.theta_grid.front() != 0.0 ||
      !std::is_sorted(options.theta_grid.begin(), options.theta_grid.end())) {
    throw Error(Errc::invalid_argument, "theta grid must be ascending and start at 0");
  }

  const bool capped = options.max_samples && *options.max_samples < full.n();
  const SampleMatrix data =
      capped ? subsample(full, *options.max_samples, derive_seed(options.seed, 1)) : full;
  const std::size_t n = data.n();
  const std::size_t k_start = n / options.beta;

  PartitionModel model{CentroidSet(Matrix(data.values().colwise().mean())), Vector{1.0}, Counts{n},
                       options.beta, 0.0, false, options.seed};

  bool found = k_start <= 1;
  const NeighbourTable neighbours = found ? NeighbourTable{} : nearest_neighbour_table(data);
  for (std::size_t k = k_start; k >= 2 && !found; --k) {
    const KMeansResult clusters =
        lloyd_kmeans(data, greedy_centroids(data, k, &neighbours), options.max_iter, options.tol);
    AmplifyResult amp = amplify_shrink(data, clusters, options.beta, options.theta_grid);
    if (amp.satisfied) {
      model.centroids = clusters.centroids;
      model.coefficients = std::move(amp.coefficients);
      model.train_counts = std::move(amp.counts);
      model.theta = amp.theta;
      found = true;
    }
  }

  if (!found) {
    const KMeansResult clusters = lloyd_kmeans(
        data, random_centroids(data, k_start, derive_seed(options.seed, 2)), options.max_iter, options.tol);
    model.centroids = clusters.centroids;
    model.coefficients = Vector(k_start, 1.0);
    model.train_counts = bin_counts(clusters.labels, k_start);
    model.theta = 0.0;
    model.fallback = true;
  }

  if (capped) {
    model.train_counts = bin_counts(model.assign(full), model.k());
  }
  return model;
}

}  // namespace eikmeans
