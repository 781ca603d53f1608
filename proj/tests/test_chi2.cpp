#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

#include "eikmeans/chi2.hpp"
#include "eikmeans/error.hpp"
#include "eikmeans/rng.hpp"

using namespace eikmeans;

namespace {

// Adaptive Gauss-Kronrod integration of the chi-square density over
// [x, x + 2000]; the remaining tail is far below double precision.
double pvalue_oracle(double x, std::size_t df) {
  const double k = static_cast<double>(df);
  const double log_norm = -0.5 * k * std::log(2.0) - std::lgamma(0.5 * k);
  auto density = [&](double t) { return t <= 0.0 ? 0.0 : std::exp(log_norm + (0.5 * k - 1.0) * std::log(t) - 0.5 * t); };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, x, x + 2000.0, 30, 1e-14, &error);
}

double statistic_oracle(const ContingencyTable& t) {
  double total = 0.0, rows[2] = {0, 0};
  std::vector<double> cols(t.bins(), 0.0);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < t.bins(); ++c) {
      rows[r] += static_cast<double>(t.at(r, c));
      cols[c] += static_cast<double>(t.at(r, c));
      total += static_cast<double>(t.at(r, c));
    }
  }
  double stat = 0.0;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < t.bins(); ++c) {
      const double e = rows[r] * cols[c] / total;
      stat += (static_cast<double>(t.at(r, c)) - e) * (static_cast<double>(t.at(r, c)) - e) / e;
    }
  }
  return stat;
}

ContingencyTable random_table(Rng& rng, std::size_t k) {
  Counts a(k), b(k);
  for (std::size_t c = 0; c < k; ++c) {
    a[c] = 1 + rng.below(120);
    b[c] = rng.below(30);
  }
  if (std::accumulate(b.begin(), b.end(), std::size_t{0}) == 0) b[0] = 1;
  return ContingencyTable(a, b);
}

}  // namespace

TEST_CASE("contingency table validation") {
  CHECK_THROWS_AS(ContingencyTable(Counts{1}, Counts{1}), Error);
  CHECK_THROWS_AS(ContingencyTable(Counts{1, 2}, Counts{1}), Error);
  CHECK_THROWS_AS(ContingencyTable(Counts{0, 0}, Counts{1, 1}), Error);
  CHECK_THROWS_AS(ContingencyTable(Counts{1, 0}, Counts{1, 0}), Error);
  CHECK_NOTHROW(ContingencyTable(Counts{20, 0}, Counts{0, 20}));
}

TEST_CASE("contingency_expected") {
  CHECK(contingency_expected(ContingencyTable({10, 10}, {10, 10})) == Matrix::Constant(2, 2, 10.0));
  CHECK(contingency_expected(ContingencyTable({50, 30}, {30, 50})) == Matrix::Constant(2, 2, 40.0));
  const Matrix e = contingency_expected(ContingencyTable({20, 0}, {0, 20}));
  CHECK(e == Matrix::Constant(2, 2, 10.0));

  Rng rng(5);
  const auto t = random_table(rng, 17);
  const Matrix ex = contingency_expected(t);
  for (std::size_t r = 0; r < 2; ++r) CHECK(ex.row(static_cast<Eigen::Index>(r)).sum() == doctest::Approx(static_cast<double>(t.row_sum(r))));
}

TEST_CASE("chi2_statistic") {
  const Matrix e = Matrix::Constant(2, 2, 40.0);
  CHECK(chi2_statistic(e, e) == 0.0);
  Matrix o(2, 2);
  o << 50, 30, 30, 50;
  CHECK(chi2_statistic(o, e) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(chi2_statistic(o, Matrix::Zero(2, 2)), Error);
  CHECK_THROWS_AS(chi2_statistic(o, Matrix::Constant(2, 3, 1.0)), Error);

  SUBCASE("invariant under a common column permutation") {
    Rng rng(8);
    const auto t = random_table(rng, 9);
    const Matrix obs = t.observed();
    const Matrix exp = contingency_expected(t);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(9);
    perm.setIdentity();
    std::swap(perm.indices()[0], perm.indices()[5]);
    std::swap(perm.indices()[2], perm.indices()[8]);
    const Matrix po = obs * perm, pe = exp * perm;
    CHECK(chi2_statistic(po, pe) == doctest::Approx(chi2_statistic(obs, exp)).epsilon(1e-14));
  }

  SUBCASE("random tables agree with the scalar-loop oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      const auto t = random_table(rng, 2 + rng.below(39));
      const double got = chi2_statistic(t.observed(), contingency_expected(t));
      CHECK(std::fabs(got - statistic_oracle(t)) < 1e-10);
    }
  }
}

TEST_CASE("degrees_of_freedom") {
  CHECK(degrees_of_freedom(2, 2) == 1);
  CHECK(degrees_of_freedom(2, 40) == 39);
  CHECK(degrees_of_freedom(3, 4) == 6);
  CHECK_THROWS_AS(degrees_of_freedom(1, 4), Error);
  CHECK_THROWS_AS(degrees_of_freedom(2, 1), Error);
}

TEST_CASE("chi2_pvalue") {
  CHECK(chi2_pvalue(0.0, 1) == 1.0);
  CHECK(chi2_pvalue(0.0, 39) == 1.0);
  CHECK(chi2_pvalue(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-4 / 0.05));
  CHECK(std::fabs(chi2_pvalue(3.841459, 1) - 0.05) < 1e-4);
  CHECK(std::fabs(chi2_pvalue(10.0, 10) - 0.4405) < 1e-4);
  CHECK_THROWS_AS(chi2_pvalue(-1.0, 3), Error);
  CHECK_THROWS_AS(chi2_pvalue(1.0, 0), Error);

  SUBCASE("within 1e-8 of numerical integration on the df/x grid") {
    double worst = 0.0;
    for (std::size_t df = 1; df <= 60; ++df) {
      for (double x = 0.1; x <= 120.0; x += (x < 10.0 ? 0.3 : 2.7)) {
        worst = std::max(worst, std::fabs(chi2_pvalue(x, df) - pvalue_oracle(x, df)));
      }
    }
    CHECK(worst < 1e-8);
  }

  SUBCASE("monotone in x and df") {
    for (std::size_t df : {1u, 5u, 39u}) {
      double prev = 1.0;
      for (double x = 0.5; x < 100.0; x += 0.5) {
        const double p = chi2_pvalue(x, df);
        CHECK(p <= prev);
        if (p > 1e-300 && prev < 1.0 - 1e-12) CHECK(p < prev);
        prev = p;
      }
    }
    for (double x : {0.5, 3.0, 30.0}) {
      for (std::size_t df = 1; df < 60; ++df) {
        const double lo = chi2_pvalue(x, df), hi = chi2_pvalue(x, df + 1);
        CHECK(lo <= hi);
        if (hi < 1.0 - 1e-12) CHECK(lo < hi);
      }
    }
  }
}

TEST_CASE("gamma_q edge cases") {
  CHECK(gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(gamma_q(0.5, 0.0) == 1.0);
  CHECK(gamma_q(3.0, INFINITY) == 0.0);
  CHECK_THROWS_AS(gamma_q(0.0, 1.0), Error);
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)));
}

TEST_CASE("chi2_test") {
  SUBCASE("proportional rows") {
    const auto r = chi2_test(ContingencyTable({10, 20, 30}, {20, 40, 60}), 0.05);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK_FALSE(r.reject);
    CHECK(r.df == 2);
  }
  SUBCASE("[[50,30],[30,50]]") {
    const auto r = chi2_test(ContingencyTable({50, 30}, {30, 50}), 0.05);
    CHECK(r.statistic == doctest::Approx(10.0));
    CHECK(r.df == 1);
    CHECK(std::fabs(r.p_value - pvalue_oracle(10.0, 1)) < 1e-10);
    CHECK(r.p_value == doctest::Approx(0.001565).epsilon(1e-3));
    CHECK(r.reject);
  }
  SUBCASE("alpha close to 1 rejects unless p == 1") {
    const double alpha = 1.0 - 1e-12;
    CHECK(chi2_test(ContingencyTable({50, 30}, {48, 31}), alpha).reject);
    CHECK_FALSE(chi2_test(ContingencyTable({50, 30}, {50, 30}), alpha).reject);
  }
  SUBCASE("alpha must lie in (0, 1)") {
    CHECK_THROWS_AS(chi2_test(ContingencyTable({5, 5}, {5, 5}), 0.0), Error);
    CHECK_THROWS_AS(chi2_test(ContingencyTable({5, 5}, {5, 5}), 1.0), Error);
  }
}

TEST_CASE("rejection rate under the null is calibrated") {
  // Both rows multinomial over the same bin probabilities, >= 50 expected per cell.
  const std::size_t k = 8, n = 800, sims = 10000;
  const double alpha = 0.05;
  Rng rng(2024);
  std::size_t rejections = 0;
  for (std::size_t s = 0; s < sims; ++s) {
    Counts a(k, 0), b(k, 0);
    for (std::size_t i = 0; i < n; ++i) ++a[rng.below(k)];
    for (std::size_t i = 0; i < n; ++i) ++b[rng.below(k)];
    if (chi2_test(ContingencyTable(a, b), alpha).reject) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / sims;
  const double band = 3.0 * std::sqrt(alpha * (1 - alpha) / sims);
  CHECK(rate >= alpha - band);
  CHECK(rate <= alpha + band);
}
