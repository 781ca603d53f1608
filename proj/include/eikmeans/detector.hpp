#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eikmeans/core.hpp"
#include "eikmeans/partitioner.hpp"

namespace eikmeans {

/// Validity flags for the chi-square approximation. They never change the decision.
enum Warning : unsigned {
  kWarnNone = 0,
  kWarnLowObserved = 1u << 0,  ///< some observed cell count <= 50
  kWarnLowExpected = 1u << 1,  ///< some expected cell count < 5
  kWarnEmptyBin = 1u << 2,     ///< a bin was empty in both samples and left out of the test
};

std::vector<std::string> warning_names(unsigned flags);

struct DriftReport {
  bool drift = false;
  double p_value = 1.0;
  double statistic = 0.0;
  std::size_t df = 0;
  double alpha = 0.05;
  Counts train_counts;
  Counts test_counts;
  unsigned warnings = kWarnNone;

  friend bool operator==(const DriftReport&, const DriftReport&) = default;
};

/// Immutable detector: a fitted histogram plus the training bin counts.
class Detector {
 public:
  explicit Detector(PartitionModel model);

  static Detector fit(const SampleMatrix& train, const FitOptions& options = {});

  const PartitionModel& model() const noexcept { return model_; }

  /// Bins the test samples, stacks the stored training counts over them and
  /// runs the chi-square test. Safe to call concurrently.
  DriftReport detect(const SampleMatrix& test, double alpha = 0.05) const;

 private:
  PartitionModel model_;
};

struct StreamOptions {
  double alpha = 0.05;
  bool refit_on_drift = false;
  FitOptions fit;
};

/// Runs detect over consecutive non-overlapping windows. With refit_on_drift,
/// a window that raises drift becomes the new training set.
std::vector<DriftReport> run_stream(Detector detector, const std::vector<SampleMatrix>& windows,
                                    const StreamOptions& options);

}  // namespace eikmeans
