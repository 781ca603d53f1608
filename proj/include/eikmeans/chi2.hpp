#pragma once

#include <array>
#include <cstddef>

#include "eikmeans/core.hpp"

namespace eikmeans {

/// 2 x K table of bin counts: row 0 is the reference (training) sample,
/// row 1 the sample under test. Every row and column sum is positive.
class ContingencyTable {
 public:
  ContingencyTable(Counts reference, Counts test);

  std::size_t bins() const noexcept { return rows_[0].size(); }
  std::size_t at(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }
  const Counts& row(std::size_t r) const { return rows_.at(r); }
  std::size_t row_sum(std::size_t r) const;
  std::size_t col_sum(std::size_t c) const { return rows_[0][c] + rows_[1][c]; }
  std::size_t total() const { return row_sum(0) + row_sum(1); }

  /// Counts as a 2 x K real matrix.
  Matrix observed() const;

 private:
  std::array<Counts, 2> rows_;
};

/// Expected frequencies E(i,j) = row_sum(i) * col_sum(j) / total.
Matrix contingency_expected(const ContingencyTable& table);

/// Pearson statistic: sum over cells of (O - E)^2 / E.
double chi2_statistic(const Matrix& observed, const Matrix& expected);

/// (rows - 1) * (cols - 1).
std::size_t degrees_of_freedom(std::size_t rows, std::size_t cols);

/// log Gamma(a) for a > 0.
double log_gamma(double a);

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double gamma_q(double a, double x);

/// Upper-tail probability P(X >= x), X ~ chi-square(df).
double chi2_pvalue(double x, std::size_t df);

struct Chi2Result {
  bool reject = false;
  double p_value = 1.0;
  double statistic = 0.0;
  std::size_t df = 0;
};

/// Pearson chi-square test of homogeneity; reject == (p < alpha).
Chi2Result chi2_test(const ContingencyTable& table, double alpha);

}  // namespace eikmeans
