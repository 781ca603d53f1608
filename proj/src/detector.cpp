#include "eikmeans/detector.hpp"

#include <string>

#include "eikmeans/chi2.hpp"
#include "eikmeans/error.hpp"

namespace eikmeans {

namespace {

constexpr std::size_t kMinObserved = 50;
constexpr double kMinExpected = 5.0;

}  // namespace

std::vector<std::string> warning_names(unsigned flags) {
  std::vector<std::string> names;
  if (flags & kWarnLowObserved) names.emplace_back("low-observed");
  if (flags & kWarnLowExpected) names.emplace_back("low-expected");
  if (flags & kWarnEmptyBin) names.emplace_back("empty-bin");
  return names;
}

Detector::Detector(PartitionModel model) : model_(std::move(model)) {
  if (model_.coefficients.size() != model_.k() || model_.train_counts.size() != model_.k()) {
    throw Error(Errc::invalid_argument, "model coefficient/count lengths do not match K");
  }
}

Detector Detector::fit(const SampleMatrix& train, const FitOptions& options) {
  return Detector(fit_partition(train, options));
}

DriftReport Detector::detect(const SampleMatrix& test, double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (test.d() != model_.d()) {
    throw Error(Errc::dimension_mismatch, "test data has " + std::to_string(test.d()) +
                                              " columns but the model expects " + std::to_string(model_.d()));
  }
  if (model_.k() < 2) {
    throw Error(Errc::degenerate_model,
                "model has a single bin; the chi-square test has zero degrees of freedom");
  }

  DriftReport report;
  report.alpha = alpha;
  report.train_counts = model_.train_counts;
  report.test_counts = bin_counts(model_.assign(test), model_.k());

  Counts reference;
  Counts observed;
  for (std::size_t k = 0; k < model_.k(); ++k) {
    if (report.train_counts[k] + report.test_counts[k] == 0) {
      report.warnings |= kWarnEmptyBin;
      continue;
    }
    reference.push_back(report.train_counts[k]);
    observed.push_back(report.test_counts[k]);
  }
  if (reference.size() < 2) {
    throw Error(Errc::degenerate_model, "fewer than two non-empty bins");
  }

  const ContingencyTable table(std::move(reference), std::move(observed));
  const Chi2Result test_result = chi2_test(table, alpha);
  report.drift = test_result.reject;
  report.p_value = test_result.p_value;
  report.statistic = test_result.statistic;
  report.df = test_result.df;

  const Matrix expected = contingency_expected(table);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < table.bins(); ++c) {
      if (table.at(r, c) <= kMinObserved) report.warnings |= kWarnLowObserved;
      if (expected(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) < kMinExpected) {
        report.warnings |= kWarnLowExpected;
      }
    }
  }
  return report;
}

std::vector<DriftReport> run_stream(Detector detector, const std::vector<SampleMatrix>& windows,
                                    const StreamOptions& options) {
  std::vector<DriftReport> reports;
  reports.reserve(windows.size());
  for (const SampleMatrix& window : windows) {
    reports.push_back(detector.detect(window, options.alpha));
    if (options.refit_on_drift && reports.back().drift) {
      detector = Detector::fit(window, options.fit);
    }
  }
  return reports;
}

}  // namespace eikmeans
