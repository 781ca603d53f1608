#include "eikmeans/chi2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "eikmeans/error.hpp"

namespace eikmeans {

ContingencyTable::ContingencyTable(Counts reference, Counts test)
    : rows_{std::move(reference), std::move(test)} {
  if (rows_[0].size() != rows_[1].size()) {
    throw Error(Errc::invalid_argument, "contingency table rows differ in length");
  }
  if (rows_[0].size() < 2) {
    throw Error(Errc::invalid_argument, "contingency table needs at least two columns");
  }
  for (std::size_t r = 0; r < 2; ++r) {
    if (row_sum(r) == 0) {
      throw Error(Errc::invalid_argument, "contingency table row " + std::to_string(r) + " sums to zero");
    }
  }
  for (std::size_t c = 0; c < bins(); ++c) {
    if (col_sum(c) == 0) {
      throw Error(Errc::invalid_argument, "contingency table column " + std::to_string(c) + " sums to zero");
    }
  }
}

std::size_t ContingencyTable::row_sum(std::size_t r) const {
  return std::accumulate(rows_.at(r).begin(), rows_.at(r).end(), std::size_t{0});
}

Matrix ContingencyTable::observed() const {
  Matrix m(2, static_cast<Eigen::Index>(bins()));
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < bins(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = static_cast<double>(rows_[r][c]);
    }
  }
  return m;
}

Matrix contingency_expected(const ContingencyTable& table) {
  const double total = static_cast<double>(table.total());
  Matrix e(2, static_cast<Eigen::Index>(table.bins()));
  for (std::size_t r = 0; r < 2; ++r) {
    const double rs = static_cast<double>(table.row_sum(r));
    for (std::size_t c = 0; c < table.bins(); ++c) {
      e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rs * static_cast<double>(table.col_sum(c)) / total;
    }
  }
  return e;
}

double chi2_statistic(const Matrix& observed, const Matrix& expected) {
  if (observed.rows() != expected.rows() || observed.cols() != expected.cols()) {
    throw Error(Errc::invalid_argument, "chi2_statistic: observed and expected shapes differ");
  }
  double stat = 0.0;
  for (Eigen::Index r = 0; r < observed.rows(); ++r) {
    for (Eigen::Index c = 0; c < observed.cols(); ++c) {
      const double e = expected(r, c);
      if (!(e > 0.0)) {
        throw Error(Errc::invalid_argument, "chi2_statistic: expected frequency must be positive");
      }
      const double diff = observed(r, c) - e;
      stat += diff * diff / e;
    }
  }
  return stat;
}

std::size_t degrees_of_freedom(std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) {
    throw Error(Errc::invalid_argument, "degrees_of_freedom: need at least 2 rows and 2 columns");
  }
  return (rows - 1) * (cols - 1);
}

double log_gamma(double a) {
  if (!(a > 0.0)) {
    throw Error(Errc::invalid_argument, "log_gamma: argument must be positive");
  }
  return std::lgamma(a);
}

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 100000;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Q(a, x) by its continued fraction (modified Lentz); for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(Errc::invalid_argument, "gamma_q: need a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi2_pvalue(double x, std::size_t df) {
  if (df < 1) {
    throw Error(Errc::invalid_argument, "chi2_pvalue: df must be >= 1");
  }
  if (!(x >= 0.0)) {
    throw Error(Errc::invalid_argument, "chi2_pvalue: statistic must be >= 0");
  }
  const double p = gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
  return std::clamp(p, 0.0, 1.0);
}

Chi2Result chi2_test(const ContingencyTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::invalid_argument, "alpha must lie in (0, 1)");
  }
  Chi2Result result;
  result.statistic = chi2_statistic(table.observed(), contingency_expected(table));
  result.df = degrees_of_freedom(2, table.bins());
  result.p_value = chi2_pvalue(result.statistic, result.df);
  result.reject = result.p_value < alpha;
  return result;
}

}  // namespace eikmeans
