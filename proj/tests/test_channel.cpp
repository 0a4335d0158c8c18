#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "semcom/channel.hpp"
#include "semcom/errors.hpp"
#include "semcom/random.hpp"

using namespace semcom;

namespace {

/// Walk `s` metres along the loop from the phase-0 corner.
Eigen::Vector2d walk(const Trajectory& tr, double s) {
  const Eigen::Vector2d corner = tr.center - Eigen::Vector2d(tr.length / 2, tr.width / 2);
  const Eigen::Vector2d legs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double lens[4] = {tr.length, tr.width, tr.length, tr.width};
  Eigen::Vector2d p = corner;
  for (int i = 0; i < 4; ++i) {
    const double step = std::min(s, lens[i]);
    p += step * legs[i];
    s -= step;
  }
  return p;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("free-space gain") {
  ChannelParams p;
  const double g100 = path_loss_gain(100.0, p);
  CHECK(std::abs(g100 - 4.046e-12) <= 1e-15);
  const double direct = 4.11 * std::pow(3e8 / (4.0 * std::numbers::pi * 2.4e9 * 100.0), 3.0);
  CHECK(g100 == doctest::Approx(direct).epsilon(1e-14));
  CHECK(path_loss_gain(50.0, p) / g100 == doctest::Approx(8.0).epsilon(1e-12));

  ChannelParams flat = p;
  flat.antenna_gain = 1.0;
  flat.pathloss_exp = 0.0;
  CHECK(path_loss_gain(3.0, flat) == 1.0);
  CHECK(path_loss_gain(3000.0, flat) == 1.0);
  CHECK_THROWS_AS(path_loss_gain(0.0, p), InvalidArgument);
}

TEST_CASE("trajectory anchors") {
  Trajectory tr;
  tr.center = {10.0, -5.0};
  tr.length = 100.0;
  tr.width = 50.0;
  tr.height = 20.0;
  tr.period = 900;
  const auto p0 = user_position(0, tr);
  CHECK(p0.x() == doctest::Approx(-40.0));
  CHECK(p0.y() == doctest::Approx(-30.0));
  CHECK(p0.z() == 20.0);
  CHECK(user_position(900, tr) == p0);

  const double perimeter = 300.0;
  for (std::int64_t t : {225, 100, 450, 700, 899}) {
    const auto expected = walk(tr, perimeter * static_cast<double>(t) / 900.0);
    const auto got = user_position(t, tr);
    CHECK(got.x() == doctest::Approx(expected.x()));
    CHECK(got.y() == doctest::Approx(expected.y()));
  }

  // Adjacent slots are adjacent on the perimeter.
  for (std::int64_t t = 0; t < 900; ++t) {
    CHECK((user_position(t + 1, tr) - user_position(t, tr)).norm() <= perimeter / 900.0 + 1e-9);
  }
}

TEST_CASE("distance to the server stays within the rectangle's bound") {
  ChannelParams p;
  Trajectory tr;
  tr.length = 100.0;
  tr.width = 150.0;
  tr.height = 50.0;
  const double bound = std::sqrt(50.0 * 50.0 + 75.0 * 75.0 + 30.0 * 30.0);
  for (std::int64_t t = 0; t < tr.period; ++t) CHECK(distance_to_server(t, tr, p) <= bound + 1e-9);
}

TEST_CASE("unit fade gives the mean SNR") {
  const auto s = snr_from_fade(2e-12, 1.0, 1e-13, FadingMode::kPower);
  CHECK(s.linear == doctest::Approx(20.0));
  CHECK(s.db == doctest::Approx(10.0 * std::log10(20.0)));
  const auto a = snr_from_fade(2.0, 1.5, 4.0, FadingMode::kAmplitude);
  CHECK(a.linear == doctest::Approx(9.0 / 4.0));
  CHECK(std::isfinite(snr_from_fade(1.0, 0.0, 1.0, FadingMode::kPower).db));
}

TEST_CASE("exponential fading statistics") {
  Rng rng(99);
  const int n = 1000000;
  double sum = 0.0;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_snr(1.0, 1.0, FadingMode::kPower, rng);
    sum += s.linear;
    above += s.linear > 1.0 ? 1 : 0;
  }
  CHECK(std::abs(sum / n - 1.0) < 0.01);
  CHECK(std::abs(static_cast<double>(above) / n - std::exp(-1.0)) < 0.01);
}

TEST_CASE("noise calibration puts the median-distance SNR on target") {
  ChannelParams p;
  Trajectory tr;
  tr.length = 100.0;
  tr.width = 100.0;
  tr.height = 50.0;
  const double noise = calibrate_noise_power(tr, p, 15.0);

  std::vector<double> d;
  for (std::int64_t t = 0; t < tr.period; ++t) {
    const auto pos = walk(tr, 400.0 * static_cast<double>(t) / static_cast<double>(tr.period));
    d.push_back(std::hypot(pos.x(), pos.y(), tr.height - 20.0));
  }
  std::sort(d.begin(), d.end());
  const double median = d[d.size() / 2];
  CHECK(10.0 * std::log10(path_loss_gain(median, p) / noise) == doctest::Approx(15.0).epsilon(1e-9));
}

TEST_CASE("identical seeds reproduce identical SNR sequences") {
  ChannelParams p;
  Trajectory tr;
  UserChannel a(tr, p, 1e-12, stream_seed(4, 1, Stream::kChannel));
  UserChannel b(tr, p, 1e-12, stream_seed(4, 1, Stream::kChannel));
  UserChannel c(tr, p, 1e-12, stream_seed(4, 2, Stream::kChannel));
  bool any_diff = false;
  for (std::int64_t t = 0; t < 200; ++t) {
    const double x = a.sample(t).db;
    CHECK(x == b.sample(t).db);
    any_diff |= x != c.sample(t).db;
  }
  CHECK(any_diff);
  CHECK(stream_seed(4, 3, Stream::kChannel) == (4u ^ 3u));
}

TEST_CASE("validation") {
  Trajectory tr;
  tr.period = 3;
  CHECK_THROWS_AS(validate(tr), InvalidArgument);
  tr = Trajectory{};
  tr.width = 0.0;
  CHECK_THROWS_AS(validate(tr), InvalidArgument);
  ChannelParams p;
  p.carrier_freq_hz = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  CHECK_THROWS_AS(UserChannel(Trajectory{}, ChannelParams{}, 0.0, 1), InvalidArgument);
}

}  // TEST_SUITE
