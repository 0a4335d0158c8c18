#pragma once

// Block Rayleigh fading over free-space path loss, for users that loop around
// a rectangular trajectory centred on the edge server.

#include <cstdint>

#include <Eigen/Core>

#include "semcom/random.hpp"

namespace semcom {

/// Rectangular loop traversed at constant speed. Phase 0 is the corner
/// (cx - length/2, cy - width/2); the loop runs +x, +y, -x, -y.
struct Trajectory {
  Eigen::Vector2d center{0.0, 0.0};
  double length{100.0};
  double width{50.0};
  double height{0.0};
  std::int64_t period{900};  // slots per loop
};

enum class FadingMode {
  kPower,      // SNR = h_bar * xi / noise
  kAmplitude,  // SNR = (h_bar * xi)^2 / noise
};

struct ChannelParams {
  double antenna_gain{4.11};
  double carrier_freq_hz{2.4e9};
  double pathloss_exp{3.0};
  double noise_power{1e-12};  // linear; usually overridden per user by calibrate_noise_power
  Eigen::Vector3d es_position{0.0, 0.0, 20.0};
  FadingMode fading{FadingMode::kPower};
};

struct SnrSample {
  double linear{0.0};
  double db{0.0};
};

void validate(const Trajectory& traj);
void validate(const ChannelParams& params);

Eigen::Vector3d user_position(std::int64_t t, const Trajectory& traj);

double distance_to_server(std::int64_t t, const Trajectory& traj, const ChannelParams& params);

/// G_A * (c / (4 pi f_c d))^{d_e}.
double path_loss_gain(double distance_m, const ChannelParams& params);

/// SNR for a given fade realization xi (test hook and building block).
SnrSample snr_from_fade(double h_bar, double xi, double noise_power, FadingMode mode);

/// One block-fading draw, xi ~ Exp(1).
SnrSample sample_snr(double h_bar, double noise_power, FadingMode mode, Rng& rng);

/// Noise power putting the unit-fade SNR at the trajectory's median distance
/// to `target_snr_db`.
double calibrate_noise_power(const Trajectory& traj, const ChannelParams& params, double target_snr_db = 15.0);

/// A user's channel: trajectory, calibrated noise and an owned random stream.
class UserChannel {
 public:
  UserChannel(Trajectory traj, ChannelParams params, double noise_power, std::uint64_t stream_seed);

  SnrSample sample(std::int64_t t);

  double noise_power() const { return noise_power_; }
  const Trajectory& trajectory() const { return traj_; }

 private:
  Trajectory traj_;
  ChannelParams params_;
  double noise_power_;
  Rng rng_;
};

}  // namespace semcom
