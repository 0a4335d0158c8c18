#include <doctest.h>

#include <vector>

#include "semcom/core.hpp"
#include "semcom/errors.hpp"

using namespace semcom;

TEST_SUITE("core") {

TEST_CASE("feature_length rounds up to whole symbols") {
  CHECK(feature_length(1.0 / 30.0, 786432) == 26215);
  CHECK(feature_length(1.0, 100) == 100);
  CHECK(feature_length(3.0 / 10.0, 786432) == 235930);
  // 0.25 * 786432 is exactly 196608; no spurious extra symbol.
  CHECK(feature_length(0.25, 786432) == 196608);
  CHECK(feature_length(1e-6, 10) == 1);
}

TEST_CASE("feature_length is nondecreasing in eps") {
  std::int64_t prev = 0;
  for (int i = 1; i <= 1000; ++i) {
    const auto len = feature_length(i / 1000.0, 786432);
    CHECK(len >= prev);
    prev = len;
  }
}

TEST_CASE("feature_length rejects bad arguments") {
  CHECK_THROWS_AS(feature_length(0.0, 10), InvalidArgument);
  CHECK_THROWS_AS(feature_length(1.5, 10), InvalidArgument);
  CHECK_THROWS_AS(feature_length(0.5, 0), InvalidArgument);
}

TEST_CASE("objective_value") {
  const std::vector<double> q2{30.0, 30.0}, zero2{0.0, 0.0};
  CHECK(objective_value(q2, zero2, 200.0, 2) == doctest::Approx(60.0));

  const std::vector<double> q1{0.0}, t1{1.0};
  CHECK(objective_value(q1, t1, 200.0, 1) == doctest::Approx(-200.0));

  // Four users at the max-CR plateau: 146.52 dB summed PSNR, 150.99 ms each.
  const std::vector<double> q4(4, 146.52 / 4.0), t4(4, 0.15099);
  CHECK(objective_value(q4, t4, 200.0, 4) == doctest::Approx(116.32).epsilon(0.05 / 116.32));

  const std::vector<double> shortv{1.0};
  CHECK_THROWS_AS(objective_value(q2, shortv, 200.0, 2), InvalidArgument);
}

TEST_CASE("objective_value is monotone in each entry") {
  const std::vector<double> q{33.0, 34.0, 27.0};
  const std::vector<double> t{0.05, 0.07, 0.02};
  const double base = objective_value(q, t, 200.0, 3);
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto q_up = q;
    q_up[i] += 1e-3;
    CHECK(objective_value(q_up, t, 200.0, 3) > base);
    auto t_up = t;
    t_up[i] += 1e-6;
    CHECK(objective_value(q, t_up, 200.0, 3) < base);
  }
}

TEST_CASE("default configuration matches the four-user experiment") {
  const auto cfg = default_config();
  REQUIRE(cfg.users.size() == 4);
  const double q_min[] = {33.0, 33.0, 26.0, 26.0};
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(cfg.users[n].q_min == q_min[n]);
    CHECK(cfg.users[n].confidence == 0.95);
    CHECK(cfg.users[n].safety_margin == 1.0);
    CHECK(cfg.users[n].source_dim == 786432);
    CHECK(cfg.users[n].user_id == static_cast<int>(n) + 1);
  }
  CHECK(cfg.alpha == 200.0);
  CHECK(cfg.window_size == 20);
  CHECK(cfg.update_interval == 20);
  CHECK(cfg.total_rate == 400e6);
  CHECK(cfg.mc_samples == 10000);
  CHECK(cfg.bits_per_symbol == 64);
  CHECK(cfg.slots == 900);
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("validate rejects broken profiles and configs") {
  auto cfg = default_config();
  SUBCASE("cr bounds") {
    cfg.users[0].cr_min = 0.4;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  }
  SUBCASE("confidence") {
    cfg.users[1].confidence = 1.0;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  }
  SUBCASE("safety margin") {
    cfg.users[2].safety_margin = -0.1;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  }
  SUBCASE("window") {
    cfg.window_size = 1;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  }
  SUBCASE("rate") {
    cfg.total_rate = 0.0;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  }
  SUBCASE("samples") {
    cfg.mc_samples = 0;
    CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  }
}

}  // TEST_SUITE
