#include "eikmeans/greedy_init.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <string>
#include <utility>

#include "eikmeans/error.hpp"

namespace eikmeans {

Counts partition_sizes(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) {
    throw Error(Errc::invalid_argument, "partition_sizes: need 1 <= K <= n (K=" + std::to_string(k) +
                                            ", n=" + std::to_string(n) + ")");
  }
  Counts sizes(k, n / k);
  for (std::size_t i = 0; i < n % k; ++i) ++sizes[i];
  return sizes;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Nearest-remaining-neighbour bookkeeping. Removing samples can only lengthen
// nearest-neighbour distances, and only for samples whose neighbour was
// removed, so those are the only ones rescanned after each round. The values
// are identical to recomputing nn_distances on the remaining pool.
class NeighbourPool {
 public:
  NeighbourPool(const SampleMatrix& data, NeighbourTable table)
      : data_(data), alive_(data.n(), true), nn_dist_(std::move(table.distance)), nn_idx_(std::move(table.index)) {
    members_.resize(data.n());
    std::iota(members_.begin(), members_.end(), 0);
  }

  std::size_t size() const noexcept { return members_.size(); }
  const std::vector<std::size_t>& members() const noexcept { return members_; }

  std::size_t farthest() const {
    std::size_t best = kNone;
    double best_dist = -1.0;
    for (const std::size_t i : members_) {  // members_ is ascending
      if (nn_dist_[i] > best_dist) {
        best_dist = nn_dist_[i];
        best = i;
      }
    }
    return best;
  }

  std::vector<std::size_t> nearest(std::size_t anchor, std::size_t count) const {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(members_.size());
    for (const std::size_t i : members_) {
      const double dist = i == anchor ? -1.0 : euclidean(data_.row(anchor), data_.row(i), data_.d());
      keyed.emplace_back(dist, i);
    }
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(count), keyed.end());
    std::vector<std::size_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = keyed[i].second;
    return out;
  }

  void remove(const std::vector<std::size_t>& gone) {
    for (const std::size_t i : gone) alive_[i] = false;
    std::erase_if(members_, [&](std::size_t i) { return !alive_[i]; });
    for (const std::size_t i : members_) {
      if (!alive_[nn_idx_[i]]) rescan(i);
    }
  }

 private:
  void rescan(std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t idx = i;
    for (const std::size_t j : members_) {
      if (j == i) continue;
      const double dist = squared_euclidean(data_.row(i), data_.row(j), data_.d());
      if (dist < best) {
        best = dist;
        idx = j;
      }
    }
    nn_dist_[i] = std::sqrt(best);
    nn_idx_[i] = idx;
  }

  const SampleMatrix& data_;
  std::vector<bool> alive_;
  std::vector<std::size_t> members_;
  Vector nn_dist_;
  std::vector<std::size_t> nn_idx_;
};

}  // namespace

NeighbourTable nearest_neighbour_table(const SampleMatrix& data) {
  const std::size_t n = data.n();
  if (n < 2) {
    throw Error(Errc::invalid_argument, "nearest_neighbour_table needs at least two samples");
  }
  NeighbourTable table{Vector(n, std::numeric_limits<double>::infinity()), std::vector<std::size_t>(n, kNone)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = squared_euclidean(data.row(i), data.row(j), data.d());
      if (dist < table.distance[i]) {
        table.distance[i] = dist;
        table.index[i] = j;
      }
      if (dist < table.distance[j]) {
        table.distance[j] = dist;
        table.index[j] = i;
      }
    }
  }
  for (double& v : table.distance) v = std::sqrt(v);
  return table;
}

GreedyGroups greedy_groups(const SampleMatrix& data, std::size_t k, const NeighbourTable* neighbours) {
  const std::size_t n = data.n();
  const Counts sizes = partition_sizes(n, k);
  const std::size_t d = data.d();

  Matrix centroids = Matrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  LabelVector groups(n, 0);
  NeighbourTable table;
  if (neighbours) {
    if (neighbours->distance.size() != n || neighbours->index.size() != n) {
      throw Error(Errc::invalid_argument, "neighbour table does not match the data");
    }
    table = *neighbours;
  } else if (n >= 2) {
    table = nearest_neighbour_table(data);
  } else {
    table = {Vector(n, 0.0), std::vector<std::size_t>(n, 0)};
  }
  NeighbourPool pool(data, std::move(table));

  for (std::size_t round = 0; round < k; ++round) {
    std::vector<std::size_t> group;
    if (pool.size() == sizes[round]) {
      group = pool.members();
    } else {
      group = pool.nearest(pool.farthest(), sizes[round]);
    }
    for (const std::size_t i : group) {
      groups[i] = round;
      for (std::size_t j = 0; j < d; ++j) centroids(static_cast<Eigen::Index>(round), static_cast<Eigen::Index>(j)) += data.row(i)[j];
    }
    centroids.row(static_cast<Eigen::Index>(round)) /= static_cast<double>(group.size());
    pool.remove(group);
  }
  return {CentroidSet(std::move(centroids)), std::move(groups)};
}

CentroidSet greedy_centroids(const SampleMatrix& data, std::size_t k, const NeighbourTable* neighbours) {
  return greedy_groups(data, k, neighbours).centroids;
}

}  // namespace eikmeans
