#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "eikmeans/core.hpp"

namespace eikmeans {

struct KMeansResult {
  CentroidSet centroids;
  LabelVector labels;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm from the given initial centroids. Stops once no centroid
/// moves farther than `tol`, or after `max_iter` update steps. A cluster that
/// empties is reseeded with the sample lying farthest from its own centroid.
/// Returned labels are the nearest-centroid labels for the returned centroids.
KMeansResult lloyd_kmeans(const SampleMatrix& data, const CentroidSet& init, std::size_t max_iter = 100,
                          double tol = 1e-6);

/// Observed over expected count per cluster; 1 means an exactly equal share.
Vector intensity_vector(std::span<const std::size_t> counts, std::span<const std::size_t> expected);

/// exp(theta * (r - 1)) per cluster.
Vector amplify_coefficients(std::span<const double> intensity, double theta);

/// Label of each sample = argmin_k coefficients[k] * dist(sample, centroid k),
/// lowest index on ties.
LabelVector amplified_assign(const SampleMatrix& data, const CentroidSet& centroids,
                             std::span<const double> coefficients);

/// Population standard deviation of counts[k] / n.
double intensity_stddev(std::span<const std::size_t> counts, std::size_t n);

/// {0, step, 2*step, ...} up to and including max (within rounding).
Vector theta_grid(double max = 1.5, double step = 0.05);

/// Fitted equal-intensity histogram.
struct PartitionModel {
  CentroidSet centroids;
  Vector coefficients;
  Counts train_counts;
  std::size_t beta = 50;
  double theta = 0.0;
  bool fallback = false;
  std::uint64_t fit_seed = 0;

  std::size_t k() const noexcept { return centroids.k(); }
  std::size_t d() const noexcept { return centroids.d(); }

  /// Bin index of every row of `data` under the amplified assignment.
  LabelVector assign(const SampleMatrix& data) const;
};

struct FitOptions {
  std::size_t beta = 50;
  Vector theta_grid = eikmeans::theta_grid();
  std::size_t max_iter = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  /// When set and smaller than n, the histogram is fitted on a seeded random
  /// subset of this many training rows.
  std::optional<std::size_t> max_samples;
};

/// Outcome of one amplify-shrink pass at a fixed K.
struct AmplifyResult {
  Vector coefficients;
  Counts counts;
  double theta = 0.0;
  bool satisfied = false;
};

/// Sweeps the theta grid in ascending order against kMeans clusters and stops
/// at the first theta whose minimum bin count reaches beta. If none does, the
/// result holds the last grid value and satisfied == false.
AmplifyResult amplify_shrink(const SampleMatrix& data, const KMeansResult& clusters, std::size_t beta,
                             std::span<const double> grid);

/// Equal-intensity partition fit.
///
/// Starts at K = floor(n / beta) and, for each K down to 2, runs greedy
/// initialization, kMeans, and an amplify-shrink sweep; the first K whose
/// sweep satisfies the minimum-count constraint wins. When no K works the
/// model falls back to kMeans from a seeded random initialization at the
/// starting K with unit coefficients. With n < 2 * beta the model has a
/// single bin.
PartitionModel fit_partition(const SampleMatrix& data, const FitOptions& options = {});

/// Seeded random subset of `count` rows, kept in ascending row order.
SampleMatrix subsample(const SampleMatrix& data, std::size_t count, std::uint64_t seed);

/// k distinct rows chosen uniformly at random, used as kMeans seeds.
CentroidSet random_centroids(const SampleMatrix& data, std::size_t k, std::uint64_t seed);

}  // namespace eikmeans
