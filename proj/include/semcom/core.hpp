#pragma once

// Shared domain types. Units: rates in bits/s, latencies in seconds, SNR and
// quality in dB.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semcom/channel.hpp"
#include "semcom/semantic_env.hpp"

namespace semcom {

inline constexpr int kSchemaVersion = 1;

struct UserProfile {
  int user_id{1};
  std::int64_t source_dim{786432};  // 3 x 512 x 512
  double cr_min{1.0 / 30.0};
  double cr_max{3.0 / 10.0};
  double q_min{30.0};
  double confidence{0.95};
  double safety_margin{1.0};
  std::string dataset{"bdd100k-like"};
  Trajectory trajectory{};
  QualityModel quality_model{};
  std::optional<double> noise_power{};  // calibrated from the trajectory when unset

  double q_min_eff() const { return q_min + safety_margin; }
};

/// Settings for the per-user GP surrogates.
struct GpSettings {
  double psi1_init{1.0};
  double psi2_init{1.0};
  double sigma_init{0.5};
  double sigma_floor{1e-3};
  int n_steps{5};
  int cold_start_slots{3};
  double snr_min_db{0.0};
  double snr_max_db{30.0};
  bool log_cr{true};
  bool log_step{true};
};

struct SystemConfig {
  std::vector<UserProfile> users;
  double total_rate{400e6};
  int bits_per_symbol{64};
  double alpha{200.0};
  int window_size{20};
  int update_interval{20};
  int mc_samples{10000};
  double learning_rate{0.01};
  std::int64_t slots{900};
  std::uint64_t seed{1};
  double target_snr_db{15.0};  // unit-fade SNR at each trajectory's median distance
  ChannelParams channel{};
  GpSettings gp{};
};

struct SlotDecision {
  std::vector<double> cr;
  std::vector<double> rate;
  std::vector<std::int64_t> feature_len;
  std::vector<double> predicted_quality_mean;  // NaN where the policy has no prediction
  std::vector<double> latency;
};

struct SlotRecord {
  std::int64_t t{0};
  std::vector<double> snr_db;
  SlotDecision decision;
  std::vector<double> true_quality;
  std::vector<double> oracle_quality;
  std::vector<bool> satisfied;
  double objective{0.0};
};

void validate(const UserProfile& user);
void validate(const SystemConfig& cfg);

/// ceil(eps * L_s), treating products within 1e-9 of an integer as exact.
std::int64_t feature_length(double eps, std::int64_t source_dim);

/// sum_n (Q_n - alpha T_n / N) with T_n in seconds.
double objective_value(std::span<const double> quality, std::span<const double> latency, double alpha, std::size_t n_users);

/// Four-user experiment: one ground vehicle plus three drones.
SystemConfig default_config();

/// The i-th user of an n-user experiment, cycling the four default users.
UserProfile template_user(std::size_t index);

}  // namespace semcom
