#include "semcom/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "semcom/errors.hpp"

namespace semcom {

namespace {
constexpr double kSpeedOfLight = 3e8;
constexpr double kMinFade = 1e-300;
}  // namespace

void validate(const Trajectory& traj) {
  detail::require(traj.length > 0 && traj.width > 0, "trajectory length and width must be positive");
  detail::require(traj.height >= 0, "trajectory height must be nonnegative");
  detail::require(traj.period >= 4, "trajectory period must be at least 4 slots");
}

void validate(const ChannelParams& params) {
  detail::require(params.carrier_freq_hz > 0, "carrier frequency must be positive");
  detail::require(params.pathloss_exp > 0, "path-loss exponent must be positive");
  detail::require(params.noise_power > 0, "noise power must be positive");
}

Eigen::Vector3d user_position(std::int64_t t, const Trajectory& traj) {
  detail::require(t >= 0, "slot index must be nonnegative");
  const double perimeter = 2.0 * (traj.length + traj.width);
  const double phase = static_cast<double>(t % traj.period) / static_cast<double>(traj.period);
  double s = phase * perimeter;

  const double x0 = traj.center.x() - traj.length / 2.0;
  const double y0 = traj.center.y() - traj.width / 2.0;
  double x = x0;
  double y = y0;
  if (s < traj.length) {
    x = x0 + s;
  } else if ((s -= traj.length) < traj.width) {
    x = x0 + traj.length;
    y = y0 + s;
  } else if ((s -= traj.width) < traj.length) {
    x = x0 + traj.length - s;
    y = y0 + traj.width;
  } else {
    s -= traj.length;
    y = y0 + traj.width - s;
  }
  return {x, y, traj.height};
}

double distance_to_server(std::int64_t t, const Trajectory& traj, const ChannelParams& params) {
  return (user_position(t, traj) - params.es_position).norm();
}

double path_loss_gain(double distance_m, const ChannelParams& params) {
  detail::require(distance_m > 0, "distance must be positive");
  const double free_space = kSpeedOfLight / (4.0 * std::numbers::pi * params.carrier_freq_hz * distance_m);
  return params.antenna_gain * std::pow(free_space, params.pathloss_exp);
}

SnrSample snr_from_fade(double h_bar, double xi, double noise_power, FadingMode mode) {
  const double fade = std::max(xi, kMinFade);
  const double gain = mode == FadingMode::kPower ? h_bar * fade : (h_bar * fade) * (h_bar * fade);
  const double linear = gain / noise_power;
  return {linear, 10.0 * std::log10(linear)};
}

SnrSample sample_snr(double h_bar, double noise_power, FadingMode mode, Rng& rng) {
  std::exponential_distribution<double> fade(1.0);
  return snr_from_fade(h_bar, fade(rng), noise_power, mode);
}

double calibrate_noise_power(const Trajectory& traj, const ChannelParams& params, double target_snr_db) {
  validate(traj);
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(traj.period));
  for (std::int64_t t = 0; t < traj.period; ++t) distances.push_back(distance_to_server(t, traj, params));
  const auto mid = distances.begin() + static_cast<std::ptrdiff_t>(distances.size() / 2);
  std::nth_element(distances.begin(), mid, distances.end());
  const double h_bar = path_loss_gain(*mid, params);
  const double unit_fade_gain = params.fading == FadingMode::kPower ? h_bar : h_bar * h_bar;
  return unit_fade_gain / std::pow(10.0, target_snr_db / 10.0);
}

UserChannel::UserChannel(Trajectory traj, ChannelParams params, double noise_power, std::uint64_t stream_seed)
    : traj_(traj), params_(params), noise_power_(noise_power), rng_(stream_seed) {
  validate(traj_);
  detail::require(noise_power_ > 0, "noise power must be positive");
}

SnrSample UserChannel::sample(std::int64_t t) {
  const double h_bar = path_loss_gain(distance_to_server(t, traj_, params_), params_);
  return sample_snr(h_bar, noise_power_, params_.fading, rng_);
}

}  // namespace semcom
