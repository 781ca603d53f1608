#include <doctest.h>

#include <future>
#include <numeric>

#include "eikmeans/datagen.hpp"
#include "eikmeans/detector.hpp"
#include "eikmeans/error.hpp"

using namespace eikmeans;

namespace {

SampleMatrix gaussian(std::size_t n, double shift, std::uint64_t seed) {
  GeneratorSpec spec;
  spec.family = Family::G1Mean;
  spec.n = n;
  spec.drifted = shift != 0.0;
  spec.delta = shift;
  spec.seed = seed;
  return gen_dataset(spec);
}

const Detector& shared_detector() {
  static const Detector detector = Detector::fit(gaussian(2000, 0.0, 11));
  return detector;
}

}  // namespace

TEST_CASE("fit caches train counts that satisfy the constraint") {
  const Detector& det = shared_detector();
  CHECK(det.model().k() >= 2);
  CHECK(det.model().k() <= 40);
  for (std::size_t c : det.model().train_counts) CHECK(c >= 50);
  CHECK(std::accumulate(det.model().train_counts.begin(), det.model().train_counts.end(), std::size_t{0}) == 2000);

  const Detector again = Detector::fit(gaussian(2000, 0.0, 11));
  CHECK(again.model().centroids == det.model().centroids);
  CHECK(again.model().coefficients == det.model().coefficients);
  CHECK(again.model().train_counts == det.model().train_counts);
}

TEST_CASE("detect on the training data itself") {
  const SampleMatrix train = gaussian(2000, 0.0, 11);
  const DriftReport r = shared_detector().detect(train, 0.05);
  CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK_FALSE(r.drift);
  CHECK(r.test_counts == r.train_counts);
  CHECK(r.df == shared_detector().model().k() - 1);
}

TEST_CASE("report invariants") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SampleMatrix test = gaussian(200, seed % 2 ? 0.3 : 0.0, 100 + seed);
    for (double alpha : {0.01, 0.05, 0.2}) {
      const DriftReport r = shared_detector().detect(test, alpha);
      CHECK(r.drift == (r.p_value < alpha));
      CHECK(r.alpha == alpha);
      CHECK(std::accumulate(r.test_counts.begin(), r.test_counts.end(), std::size_t{0}) == 200);
      CHECK(r.test_counts.size() == shared_detector().model().k());
      // 200 test samples over ~30 bins always leave some cell at or below 50.
      CHECK((r.warnings & kWarnLowObserved) != 0);
    }
  }
}

TEST_CASE("strong shift is detected") {
  const DriftReport r = shared_detector().detect(gaussian(200, 2.0, 5), 0.05);
  CHECK(r.drift);
  CHECK(r.p_value < 1e-6);
}

TEST_CASE("detect errors") {
  SUBCASE("dimension mismatch names both widths") {
    const SampleMatrix wide = SampleMatrix::from_rows({{0, 0, 0}, {1, 1, 1}});
    try {
      (void)shared_detector().detect(wide, 0.05);
      FAIL("expected an exception");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::dimension_mismatch);
      const std::string what = e.what();
      CHECK(what.find('3') != std::string::npos);
      CHECK(what.find('2') != std::string::npos);
    }
  }
  SUBCASE("alpha out of range") {
    const SampleMatrix test = gaussian(10, 0.0, 1);
    CHECK_THROWS_AS((void)shared_detector().detect(test, 0.0), Error);
    CHECK_THROWS_AS((void)shared_detector().detect(test, 1.5), Error);
  }
  SUBCASE("single-bin model") {
    const Detector tiny = Detector::fit(gaussian(60, 0.0, 3));
    CHECK(tiny.model().k() == 1);
    try {
      (void)tiny.detect(gaussian(20, 0.0, 4), 0.05);
      FAIL("expected an exception");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::degenerate_model);
    }
  }
  SUBCASE("an empty test set cannot be formed") {
    CHECK_THROWS_AS(SampleMatrix::from_rows({}), Error);
  }
  SUBCASE("inconsistent model") {
    PartitionModel m = shared_detector().model();
    m.train_counts.pop_back();
    CHECK_THROWS_AS(Detector{m}, Error);
  }
}

TEST_CASE("warnings") {
  CHECK(warning_names(kWarnNone).empty());
  CHECK(warning_names(kWarnLowObserved | kWarnEmptyBin) == std::vector<std::string>{"low-observed", "empty-bin"});

  SUBCASE("empty bin is dropped and flagged") {
    // Three far-apart groups of 60; the test sample never reaches the third.
    std::vector<Vector> rows;
    for (int g = 0; g < 3; ++g) {
      for (int i = 0; i < 60; ++i) rows.push_back({g * 100.0 + (i % 10) * 0.01, (i / 10) * 0.01});
    }
    const Detector det{PartitionModel{CentroidSet(Matrix{{0.05, 0.03}, {100.05, 0.03}, {200.05, 0.03}}),
                                      {1.0, 1.0, 1.0}, {60, 60, 0}}};
    std::vector<Vector> test_rows(rows.begin(), rows.begin() + 120);
    const DriftReport r = det.detect(SampleMatrix::from_rows(test_rows), 0.05);
    CHECK((r.warnings & kWarnEmptyBin) != 0);
    CHECK(r.df == 1);
    CHECK(r.test_counts == Counts{60, 60, 0});
    CHECK_FALSE(r.drift);
  }
  SUBCASE("low expected count") {
    const Detector det{PartitionModel{CentroidSet(Matrix{{0.0}, {10.0}}), {1.0, 1.0}, {500, 500}}};
    const DriftReport r = det.detect(SampleMatrix::from_rows({{0.1}, {0.2}, {9.8}, {10.1}}), 0.05);
    CHECK((r.warnings & kWarnLowExpected) != 0);
    CHECK((r.warnings & kWarnLowObserved) != 0);
    CHECK_FALSE(r.drift);
  }
}

TEST_CASE("concurrent detect calls agree") {
  const SampleMatrix test = gaussian(200, 0.3, 77);
  const DriftReport reference = shared_detector().detect(test, 0.05);
  std::vector<std::future<DriftReport>> jobs;
  for (int i = 0; i < 8; ++i) {
    jobs.push_back(std::async(std::launch::async, [&] { return shared_detector().detect(test, 0.05); }));
  }
  for (auto& job : jobs) CHECK(job.get() == reference);
}

TEST_CASE("label column appended as a feature") {
  auto with_label = [](const SampleMatrix& x, std::uint64_t seed) {
    Matrix m(x.n(), x.d() + 1);
    m.leftCols(x.d()) = x.values();
    for (std::size_t i = 0; i < x.n(); ++i) m(static_cast<Eigen::Index>(i), x.d()) = static_cast<double>((i + seed) % 2);
    return SampleMatrix(m);
  };
  const Detector det = Detector::fit(with_label(gaussian(2000, 0.0, 31), 0));
  CHECK(det.model().d() == 3);
  const DriftReport r = det.detect(with_label(gaussian(200, 0.0, 32), 1), 0.05);
  CHECK(r.df + 1 <= det.model().k());
  CHECK(std::accumulate(r.test_counts.begin(), r.test_counts.end(), std::size_t{0}) == 200);
}

TEST_CASE("run_stream") {
  StreamOptions opts;
  opts.alpha = 0.05;

  SUBCASE("windows equal to the training data never alarm") {
    const SampleMatrix train = gaussian(2000, 0.0, 11);
    const auto reports = run_stream(shared_detector(), {train, train, train}, opts);
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) CHECK_FALSE(r.drift);
  }

  SUBCASE("alarms concentrate after the shift") {
    std::size_t early = 0, late = 0;
    for (std::uint64_t run = 0; run < 10; ++run) {
      std::vector<SampleMatrix> windows;
      for (int w = 0; w < 5; ++w) windows.push_back(gaussian(200, 0.0, 1000 + run * 10 + w));
      for (int w = 0; w < 5; ++w) windows.push_back(gaussian(200, 0.3, 5000 + run * 10 + w));
      const auto reports = run_stream(shared_detector(), windows, opts);
      for (int w = 0; w < 5; ++w) early += reports[w].drift;
      for (int w = 5; w < 10; ++w) late += reports[w].drift;
    }
    // Expected roughly 2-3 false alarms and about 30 detections out of 50 each.
    CHECK(early <= 10);
    CHECK(late >= 20);
    CHECK(late > 2 * early);
  }

  SUBCASE("refit on drift goes quiet under a permanent shift") {
    StreamOptions refit = opts;
    refit.refit_on_drift = true;
    refit.fit.beta = 50;
    std::size_t tail_alarms = 0;
    for (std::uint64_t run = 0; run < 20; ++run) {
      std::vector<SampleMatrix> windows;
      windows.push_back(gaussian(2000, 3.0, 9000 + run));
      for (int w = 0; w < 6; ++w) windows.push_back(gaussian(2000, 3.0, 9100 + run * 10 + w));
      const auto reports = run_stream(shared_detector(), windows, refit);
      CHECK(reports.front().drift);
      for (std::size_t w = 3; w < reports.size(); ++w) tail_alarms += reports[w].drift;
    }
    // 80 post-refit stationary windows at alpha=0.05.
    CHECK(tail_alarms <= 12);
  }
}
