#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eikmeans/core.hpp"
#include "eikmeans/error.hpp"
#include "eikmeans/rng.hpp"

using namespace eikmeans;

namespace {

SampleMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-3.0, 3.0);
  return SampleMatrix(std::move(m));
}

SampleMatrix line(std::initializer_list<double> xs) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  return SampleMatrix::from_rows(rows);
}

// Independent scalar oracle: distance written out with std::hypot-free loop over pow.
double oracle_distance(const SampleMatrix& a, std::size_t i, const SampleMatrix& b, std::size_t j) {
  long double s = 0.0L;
  for (std::size_t c = 0; c < a.d(); ++c) s += std::pow(static_cast<long double>(a.row(i)[c]) - b.row(j)[c], 2);
  return static_cast<double>(std::sqrt(s));
}

}  // namespace

TEST_CASE("sample matrix rejects empty and non-finite input") {
  CHECK_THROWS_AS(SampleMatrix(Matrix(0, 2)), Error);
  Matrix bad(1, 2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(SampleMatrix{bad}, Error);
  CHECK_THROWS_AS(SampleMatrix::from_rows({{1.0, 2.0}, {3.0}}), Error);
}

TEST_CASE("pairwise_distance") {
  SUBCASE("3-4-5 triangle") {
    const auto d = pairwise_distance(SampleMatrix::from_rows({{0, 0}}), SampleMatrix::from_rows({{3, 4}}));
    CHECK(d(0, 0) == 5.0);
  }
  SUBCASE("identity") {
    const auto a = SampleMatrix::from_rows({{1.5, -2.0}});
    CHECK(pairwise_distance(a, a)(0, 0) == 0.0);
  }
  SUBCASE("matches a double-loop oracle") {
    const auto a = random_matrix(5, 3, 1);
    const auto b = random_matrix(4, 3, 2);
    const auto d = pairwise_distance(a, b);
    REQUIRE(d.rows() == 5);
    REQUIRE(d.cols() == 4);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(std::fabs(d(i, j) - oracle_distance(a, i, b, j)) < 1e-12);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(pairwise_distance(random_matrix(2, 2, 1), random_matrix(2, 3, 1)), Error);
  }
  SUBCASE("symmetric with zero diagonal, triangle inequality") {
    const auto a = random_matrix(30, 4, 3);
    const auto d = pairwise_distance(a, a);
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      CHECK(d(i, i) == 0.0);
      for (Eigen::Index j = 0; j < d.cols(); ++j) {
        CHECK(d(i, j) == d(j, i));
        CHECK(d(i, j) >= 0.0);
        for (Eigen::Index k = 0; k < d.cols(); ++k) CHECK(d(i, k) <= d(i, j) + d(j, k) + 1e-9);
      }
    }
  }
}

TEST_CASE("nn_distances") {
  CHECK(nn_distances(line({0, 1, 3})) == Vector{1, 1, 2});
  CHECK(nn_distances(line({0, 0, 5})) == Vector{0, 0, 5});
  CHECK_THROWS_AS(nn_distances(line({1})), Error);

  const auto data = random_matrix(200, 2, 9);
  const auto nn = nn_distances(data);
  for (std::size_t i = 0; i < data.n(); ++i) {
    double best = INFINITY;
    for (std::size_t j = 0; j < data.n(); ++j) {
      if (j != i) best = std::min(best, euclidean(data.row(i), data.row(j), data.d()));
    }
    CHECK(nn[i] == best);
  }
}

TEST_CASE("knn_indices") {
  const auto pts = line({0, 1, 3});
  CHECK(knn_indices(0, pts, 2) == std::vector<std::size_t>{0, 1});
  CHECK(knn_indices(2, pts, 3) == std::vector<std::size_t>{2, 1, 0});
  CHECK_THROWS_AS(knn_indices(0, pts, 4), Error);
  CHECK_THROWS_AS(knn_indices(0, pts, 0), Error);

  SUBCASE("anchor comes first even among duplicates") {
    CHECK(knn_indices(2, line({5, 5, 5, 9}), 3) == std::vector<std::size_t>{2, 0, 1});
  }

  SUBCASE("matches a full-sort oracle with index tie-break") {
    const auto data = random_matrix(100, 3, 4);
    for (std::size_t anchor : {0u, 17u, 99u}) {
      std::vector<std::size_t> order(data.n());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return oracle_distance(data, anchor, data, a) < oracle_distance(data, anchor, data, b);
      });
      order.resize(10);
      const auto got = knn_indices(anchor, data, 10);
      CHECK(got == order);
      for (std::size_t i = 1; i < got.size(); ++i) {
        CHECK(euclidean(data.row(anchor), data.row(got[i - 1]), 3) <= euclidean(data.row(anchor), data.row(got[i]), 3));
      }
    }
  }

  SUBCASE("distance ties go to the lower index") {
    CHECK(knn_indices(1, line({-1, 0, 1, 2}), 3) == std::vector<std::size_t>{1, 0, 2});
  }
}

TEST_CASE("nearest_centroid ties go to the lowest index") {
  const auto data = line({5.0});
  const CentroidSet c(SampleMatrix::from_rows({{0}, {10}}).values());
  CHECK(nearest_centroid(data, c) == LabelVector{0});
}

TEST_CASE("bin_counts") {
  const LabelVector labels{0, 2, 2, 1, 2};
  CHECK(bin_counts(labels, 3) == Counts{1, 1, 3});
  CHECK_THROWS_AS(bin_counts(labels, 2), Error);
}
