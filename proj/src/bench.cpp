#include "eikmeans/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "eikmeans/detector.hpp"
#include "eikmeans/error.hpp"
#include "eikmeans/greedy_init.hpp"
#include "eikmeans/rng.hpp"

namespace eikmeans {

namespace {

constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kFitStream = 1;
constexpr std::uint64_t kStationaryStream = 1'000'000;
constexpr std::uint64_t kDriftStream = 2'000'000;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("EIKMEANS_BENCH_THREADS")) n = std::strtoul(env, nullptr, 10);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(jobs, 1));
}

GeneratorSpec spec_for(const TrialConfig& cfg, std::size_t n, bool drifted, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.family = cfg.family;
  spec.delta = cfg.delta;
  spec.shift_mean = cfg.shift_mean;
  spec.extra_dims = cfg.extra_dims;
  spec.n = n;
  spec.drifted = drifted;
  spec.seed = seed;
  return spec;
}

}  // namespace

void TrialConfig::validate() const {
  if (n_train < 1 || n_test < 1 || n_stationary_sets < 1 || n_drift_sets < 1 || repetitions < 1) {
    throw Error(Errc::invalid_argument, "trial counts must all be >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::invalid_argument, "alpha must lie in (0, 1)");
  }
  if (family == Family::CustomMixture) {
    throw Error(Errc::invalid_argument, "benchmark trials use the built-in families");
  }
}

std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t repetition) {
  return derive_seed(base_seed, repetition);
}

RepetitionResult run_repetition(const TrialConfig& cfg, std::size_t repetition) {
  const auto start = std::chrono::steady_clock::now();
  RepetitionResult out;
  out.index = repetition;
  out.seed = repetition_seed(cfg.base_seed, repetition);

  const SampleMatrix train = gen_dataset(spec_for(cfg, cfg.n_train, false, derive_seed(out.seed, kTrainStream)));
  FitOptions fit;
  fit.beta = cfg.beta;
  fit.theta_grid = cfg.theta_grid;
  fit.max_samples = cfg.max_samples;
  fit.seed = derive_seed(out.seed, kFitStream);
  const Detector detector = Detector::fit(train, fit);
  out.k = detector.model().k();
  out.theta = detector.model().theta;
  out.fallback = detector.model().fallback;

  std::size_t false_alarms = 0;
  for (std::size_t i = 0; i < cfg.n_stationary_sets; ++i) {
    const SampleMatrix test = gen_dataset(spec_for(cfg, cfg.n_test, false, derive_seed(out.seed, kStationaryStream + i)));
    if (detector.detect(test, cfg.alpha).drift) ++false_alarms;
  }
  std::size_t misses = 0;
  for (std::size_t i = 0; i < cfg.n_drift_sets; ++i) {
    const SampleMatrix test = gen_dataset(spec_for(cfg, cfg.n_test, true, derive_seed(out.seed, kDriftStream + i)));
    if (!detector.detect(test, cfg.alpha).drift) ++misses;
  }
  out.type1 = 100.0 * static_cast<double>(false_alarms) / static_cast<double>(cfg.n_stationary_sets);
  out.type2 = 100.0 * static_cast<double>(misses) / static_cast<double>(cfg.n_drift_sets);
  out.seconds = seconds_since(start);
  return out;
}

TrialResult run_trial(const TrialConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  TrialResult result;
  result.repetitions.resize(cfg.repetitions);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < cfg.repetitions; r = next++) {
      try {
        result.repetitions[r] = run_repetition(cfg, r);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = worker_count(cfg.threads, cfg.repetitions);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> t1, t2;
  for (const auto& rep : result.repetitions) {
    t1.push_back(rep.type1);
    t2.push_back(rep.type2);
  }
  mean_std(t1, result.type1_mean, result.type1_std);
  mean_std(t2, result.type2_mean, result.type2_std);
  result.wall_seconds = seconds_since(start);
  return result;
}

std::vector<SweepRow> run_training_size_sweep(const TrialConfig& cfg, const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) {
    throw Error(Errc::invalid_argument, "training-size sweep needs at least one size");
  }
  std::vector<SweepRow> rows;
  for (const std::size_t n : sizes) {
    TrialConfig c = cfg;
    c.n_train = n;
    rows.push_back({n, run_trial(c)});
  }
  return rows;
}

Counts equal_intensity_counts(const SampleMatrix& data, std::size_t k, std::size_t beta, const Vector& grid) {
  if (k == 1) return {data.n()};
  const KMeansResult clusters = lloyd_kmeans(data, greedy_centroids(data, k));
  return amplify_shrink(data, clusters, beta, grid).counts;
}

DiagnosticResult run_partition_diagnostic(Experiment1Variant variant, std::size_t k,
                                          const std::vector<std::uint64_t>& seeds, std::size_t beta,
                                          const Vector& grid) {
  if (seeds.empty()) {
    throw Error(Errc::invalid_argument, "diagnostic needs at least one seed");
  }
  DiagnosticResult out;
  for (const std::uint64_t seed : seeds) {
    const SampleMatrix data = gen_experiment1_sets(variant, seed).data;
    if (k < 1 || k > data.n()) {
      throw Error(Errc::invalid_argument, "diagnostic K must lie in [1, n]");
    }
    const Counts ei = equal_intensity_counts(data, k, beta, grid);
    const KMeansResult plain = lloyd_kmeans(data, random_centroids(data, k, derive_seed(seed, 7)));
    out.ei_per_seed.push_back(intensity_stddev(ei, data.n()));
    out.kmeans_per_seed.push_back(intensity_stddev(bin_counts(plain.labels, k), data.n()));
  }
  double unused = 0.0;
  mean_std(out.ei_per_seed, out.ei_intensity_std, unused);
  mean_std(out.kmeans_per_seed, out.kmeans_intensity_std, unused);
  return out;
}

}  // namespace eikmeans
