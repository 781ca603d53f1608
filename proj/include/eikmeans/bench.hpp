#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eikmeans/datagen.hpp"
#include "eikmeans/partitioner.hpp"

namespace eikmeans {

struct TrialConfig {
  Family family = Family::G1Mean;
  std::optional<double> delta;
  bool shift_mean = true;
  std::size_t extra_dims = 0;
  std::size_t n_train = 2000;
  std::size_t n_test = 200;
  std::size_t n_stationary_sets = 250;
  std::size_t n_drift_sets = 250;
  std::size_t repetitions = 10;
  double alpha = 0.05;
  std::size_t beta = 50;
  Vector theta_grid = eikmeans::theta_grid();
  /// Fit each histogram on a random subset of this many training rows.
  std::optional<std::size_t> max_samples;
  std::uint64_t base_seed = 0;
  /// 0 = EIKMEANS_BENCH_THREADS or hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

struct RepetitionResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double type1 = 0.0;  ///< percent of stationary sets flagged as drift
  double type2 = 0.0;  ///< percent of drifted sets not flagged
  std::size_t k = 0;
  double theta = 0.0;
  bool fallback = false;
  double seconds = 0.0;
};

struct TrialResult {
  double type1_mean = 0.0;
  double type1_std = 0.0;
  double type2_mean = 0.0;
  double type2_std = 0.0;
  std::vector<RepetitionResult> repetitions;  ///< sorted by index
  double wall_seconds = 0.0;
};

/// Seed of repetition r: derive_seed(base_seed, r). Inside a repetition the
/// training set, the fit, stationary set i and drifted set i each use their
/// own stream derived from that seed, so any repetition can be re-run alone.
std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t repetition);

RepetitionResult run_repetition(const TrialConfig& cfg, std::size_t repetition);

/// Monte-Carlo Type-I / Type-II estimate. Repetitions may run in parallel;
/// the result does not depend on the thread count.
TrialResult run_trial(const TrialConfig& cfg);

struct SweepRow {
  std::size_t n_train = 0;
  TrialResult result;
};

std::vector<SweepRow> run_training_size_sweep(const TrialConfig& cfg, const std::vector<std::size_t>& sizes);

struct DiagnosticResult {
  double ei_intensity_std = 0.0;
  double kmeans_intensity_std = 0.0;
  std::vector<double> ei_per_seed;
  std::vector<double> kmeans_per_seed;
};

/// Compares the intensity spread of the equal-intensity partition (greedy
/// init, kMeans, amplify-shrink at a fixed K) with plain random-init kMeans
/// at the same K, averaged over the given data seeds.
DiagnosticResult run_partition_diagnostic(Experiment1Variant variant, std::size_t k,
                                          const std::vector<std::uint64_t>& seeds, std::size_t beta = 50,
                                          const Vector& grid = theta_grid());

/// Counts of the fixed-K equal-intensity partition used by the diagnostic.
Counts equal_intensity_counts(const SampleMatrix& data, std::size_t k, std::size_t beta, const Vector& grid);

}  // namespace eikmeans
