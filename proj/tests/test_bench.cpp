#include <doctest.h>

#include <cmath>

#include "eikmeans/bench.hpp"
#include "eikmeans/error.hpp"
#include "eikmeans/rng.hpp"

using namespace eikmeans;

namespace {

TrialConfig small_config() {
  TrialConfig cfg;
  cfg.family = Family::G1Mean;
  cfg.n_train = 800;
  cfg.n_test = 200;
  cfg.n_stationary_sets = 60;
  cfg.n_drift_sets = 60;
  cfg.repetitions = 3;
  cfg.base_seed = 17;
  cfg.threads = 1;
  return cfg;
}

double sample_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("config validation") {
  TrialConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config();
  cfg.repetitions = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config();
  cfg.n_test = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config();
  cfg.family = Family::CustomMixture;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("repetition seeds") {
  CHECK(repetition_seed(5, 0) == derive_seed(5, 0));
  CHECK(repetition_seed(5, 1) != repetition_seed(5, 0));
  CHECK(repetition_seed(5, 1) != repetition_seed(6, 1));
}

TEST_CASE("trial aggregation, reproducibility and thread independence") {
  const TrialConfig cfg = small_config();
  const TrialResult a = run_trial(cfg);
  REQUIRE(a.repetitions.size() == 3);

  std::vector<double> t1, t2;
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& rep = a.repetitions[r];
    CHECK(rep.index == r);
    CHECK(rep.seed == repetition_seed(cfg.base_seed, r));
    CHECK(rep.type1 >= 0.0);
    CHECK(rep.type1 <= 100.0);
    CHECK(rep.type2 >= 0.0);
    CHECK(rep.type2 <= 100.0);
    CHECK(rep.k >= 2);
    // Rates are multiples of one set out of 60.
    CHECK(std::fabs(rep.type1 * 60.0 / 100.0 - std::round(rep.type1 * 60.0 / 100.0)) < 1e-9);
    t1.push_back(rep.type1);
    t2.push_back(rep.type2);
  }
  CHECK(a.type1_mean == doctest::Approx((t1[0] + t1[1] + t1[2]) / 3.0));
  CHECK(a.type2_mean == doctest::Approx((t2[0] + t2[1] + t2[2]) / 3.0));
  CHECK(a.type1_std == doctest::Approx(sample_std(t1)));
  CHECK(a.type2_std == doctest::Approx(sample_std(t2)));

  const TrialResult b = run_trial(cfg);
  CHECK(b.type1_mean == a.type1_mean);
  CHECK(b.type2_mean == a.type2_mean);
  CHECK(b.type2_std == a.type2_std);

  TrialConfig threaded = cfg;
  threaded.threads = 3;
  const TrialResult c = run_trial(threaded);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(c.repetitions[r].type1 == a.repetitions[r].type1);
    CHECK(c.repetitions[r].type2 == a.repetitions[r].type2);
    CHECK(c.repetitions[r].k == a.repetitions[r].k);
  }

  const RepetitionResult alone = run_repetition(cfg, 2);
  CHECK(alone.type1 == a.repetitions[2].type1);
  CHECK(alone.type2 == a.repetitions[2].type2);
}

TEST_CASE("zero drift margin makes the drift sets stationary") {
  TrialConfig cfg = small_config();
  cfg.delta = 0.0;
  cfg.n_stationary_sets = 20;
  cfg.n_drift_sets = 200;
  const TrialResult r = run_trial(cfg);
  // 600 stationary tests: 3-sigma binomial band around 95%.
  const double band = 300.0 * std::sqrt(0.05 * 0.95 / 600.0);
  CHECK(r.type2_mean >= 95.0 - band);
  CHECK(r.type2_mean <= 95.0 + band);
}

TEST_CASE("alpha monotonicity on identical seeds") {
  TrialConfig lo = small_config();
  lo.alpha = 0.01;
  TrialConfig hi = small_config();
  hi.alpha = 0.05;
  const TrialResult a = run_trial(lo);
  const TrialResult b = run_trial(hi);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(a.repetitions[r].type1 <= b.repetitions[r].type1);
    CHECK(a.repetitions[r].type2 >= b.repetitions[r].type2);
  }
}

TEST_CASE("training size sweep") {
  const TrialConfig cfg = small_config();
  const auto rows = run_training_size_sweep(cfg, {800});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n_train == 800);
  const TrialResult direct = run_trial(cfg);
  CHECK(rows[0].result.type1_mean == direct.type1_mean);
  CHECK(rows[0].result.type2_mean == direct.type2_mean);
  CHECK_THROWS_AS(run_training_size_sweep(cfg, {}), Error);
}

TEST_CASE("fitting on a training subset") {
  TrialConfig cfg = small_config();
  cfg.repetitions = 2;
  const TrialResult full = run_trial(cfg);
  cfg.max_samples = cfg.n_train;
  const TrialResult same = run_trial(cfg);
  CHECK(same.type2_mean == full.type2_mean);
  cfg.max_samples = 300;
  const TrialResult sub = run_trial(cfg);
  for (const auto& rep : sub.repetitions) CHECK(rep.k <= 6);
}

TEST_CASE("partition diagnostic") {
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  const auto skewed = run_partition_diagnostic(Experiment1Variant::G3Skewed, 9, seeds);
  CHECK(skewed.ei_per_seed.size() == 5);
  CHECK(skewed.kmeans_per_seed.size() == 5);
  CHECK(skewed.ei_intensity_std < skewed.kmeans_intensity_std);

  const auto single = run_partition_diagnostic(Experiment1Variant::G1, 9, seeds);
  CHECK(single.ei_intensity_std < 0.06);
  CHECK(single.kmeans_intensity_std < 0.06);
  CHECK(std::fabs(single.ei_intensity_std - single.kmeans_intensity_std) < 0.01);

  const auto one = run_partition_diagnostic(Experiment1Variant::G3Equal, 1, {1});
  CHECK(one.ei_intensity_std == 0.0);
  CHECK(one.kmeans_intensity_std == 0.0);
}
