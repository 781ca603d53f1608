#pragma once

#include <cstddef>

#include "eikmeans/core.hpp"

namespace eikmeans {

/// Splits n samples into K group sizes: floor(n/K) each, with the remainder
/// handed out one apiece to the first (n mod K) groups.
Counts partition_sizes(std::size_t n, std::size_t k);

/// Nearest other sample of every row: its distance and (lowest) index.
/// Depends only on the data, so one table serves greedy runs at every K.
struct NeighbourTable {
  Vector distance;
  std::vector<std::size_t> index;
};

/// Requires n >= 2.
NeighbourTable nearest_neighbour_table(const SampleMatrix& data);

struct GreedyGroups {
  CentroidSet centroids;
  /// Group index of every sample, in selection order of the groups.
  LabelVector groups;
};

/// Greedy equal-intensity initialization.
///
/// Each round picks the remaining sample whose nearest remaining neighbour is
/// farthest away (lowest index on ties), claims it together with its nearest
/// remaining neighbours up to the round's group size, records their mean as a
/// centroid and removes them from the pool. Group sizes follow
/// partition_sizes(n, K). Deterministic.
///
/// `neighbours`, when given, must be nearest_neighbour_table(data).
GreedyGroups greedy_groups(const SampleMatrix& data, std::size_t k, const NeighbourTable* neighbours = nullptr);

CentroidSet greedy_centroids(const SampleMatrix& data, std::size_t k, const NeighbourTable* neighbours = nullptr);

}  // namespace eikmeans
