#include <doctest.h>

#include <cmath>
#include <string>

#include "semcom/errors.hpp"
#include "semcom/semantic_env.hpp"

using namespace semcom;

TEST_SUITE("semantic_env") {

TEST_CASE("mean quality is nondecreasing in SNR and CR for every dataset") {
  for (const auto& tag : dataset_tags()) {
    INFO(tag);
    const auto m = calibrate_default(tag);
    for (int i = 0; i < 50; ++i) {
      const double snr = -10.0 + 50.0 * i / 49.0;
      for (int j = 0; j < 50; ++j) {
        const double eps = m.cr_min + (m.cr_max - m.cr_min) * j / 49.0;
        const double q = mean_quality(snr, eps, m);
        if (i > 0) CHECK(mean_quality(snr - 50.0 / 49.0, eps, m) <= q);
        if (j > 0) CHECK(mean_quality(snr, eps - (m.cr_max - m.cr_min) / 49.0, m) <= q + 1e-12);
      }
    }
  }
}

TEST_CASE("bdd100k-like low-CR SNR anchors") {
  const auto m = calibrate_default("bdd100k-like");
  const double cr = 1.0 / 30.0;
  CHECK(std::abs(mean_quality(0.0, cr, m) - 23.89) <= 0.3);
  CHECK(std::abs(mean_quality(18.0, cr, m) - 28.65) <= 0.3);
  CHECK(mean_quality(30.0, cr, m) - mean_quality(18.0, cr, m) <= 0.5);
}

TEST_CASE("CR gains: large up to 1/6, small beyond") {
  for (const auto& tag : dataset_tags()) {
    INFO(tag);
    const auto m = calibrate_default(tag);
    const double lo = mean_quality(30.0, 1.0 / 30.0, m);
    const double mid = mean_quality(30.0, 1.0 / 6.0, m);
    const double hi = mean_quality(30.0, 3.0 / 10.0, m);
    CHECK(mid - lo >= 4.0);
    CHECK(mid - lo <= 10.0);
    CHECK(hi - mid < 1.0);
  }
}

TEST_CASE("max-CR plateaus") {
  CHECK(std::abs(calibrate_default("bdd100k-like").q_ceil_max_cr - 40.34) <= 0.5);
  CHECK(std::abs(calibrate_default("ubm-like").q_ceil_max_cr - 33.69) <= 0.5);
}

TEST_CASE("content noise has the configured spread") {
  auto m = calibrate_default("mtdt-like");
  Rng rng(12);
  const int n = 100000;
  const double mean = mean_quality(10.0, 0.1, m);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = true_quality(10.0, 0.1, m, rng) - mean;
    sum += d;
    sq += d * d;
  }
  const double var = sq / n - (sum / n) * (sum / n);
  CHECK(std::abs(var / (m.content_noise_std * m.content_noise_std) - 1.0) < 0.03);

  m.content_noise_std = 0.0;
  CHECK(true_quality(10.0, 0.1, m, rng) == mean);
}

TEST_CASE("oracle error is bounded and centered") {
  auto m = calibrate_default("ubs-like");
  Rng rng(6);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = oracle_predict(30.0, m, rng) - 30.0;
    CHECK(std::abs(e) <= m.oracle_error_bound);
    sum += e;
  }
  // uniform on [-1, 1]: standard error of the mean is 1/sqrt(3n)
  CHECK(std::abs(sum / n) < 4.0 / std::sqrt(3.0 * n));

  m.oracle_error_bound = 0.0;
  CHECK(oracle_predict(30.0, m, rng) == 30.0);
}

TEST_CASE("slot content shares the noise between decoder and oracle") {
  const auto m = calibrate_default("bdd100k-like");
  Rng content(1), oracle(2);
  for (int i = 0; i < 100; ++i) {
    const auto c = draw_slot_content(m, content, oracle);
    const double t = c.true_at(12.0, 0.2, m);
    CHECK(t == mean_quality(12.0, 0.2, m) + c.content_noise);
    CHECK(std::abs(c.oracle_at(12.0, 0.2, m) - t) <= m.oracle_error_bound + 1e-12);
  }
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(calibrate_default("imagenet"), InvalidArgument);
  CHECK(dataset_tags().size() == 4);
  const auto m = calibrate_default("bdd100k-like");
  CHECK_THROWS_AS(mean_quality(10.0, 0.5, m), InvalidArgument);
  QualityModel bad;
  bad.snr_slope = 0.0;
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
}

}  // TEST_SUITE
