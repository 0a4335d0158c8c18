#include "semcom/core.hpp"

#include <array>
#include <cmath>

#include "semcom/errors.hpp"

namespace semcom {

void validate(const UserProfile& u) {
  detail::require(u.source_dim >= 1, "user " + std::to_string(u.user_id) + ": source_dim must be at least 1");
  detail::require(u.cr_min > 0 && u.cr_min < u.cr_max && u.cr_max <= 1,
                  "user " + std::to_string(u.user_id) + ": need 0 < cr_min < cr_max <= 1");
  detail::require(u.confidence > 0 && u.confidence < 1, "user " + std::to_string(u.user_id) + ": confidence must lie in (0,1)");
  detail::require(u.safety_margin >= 0, "user " + std::to_string(u.user_id) + ": safety_margin must be nonnegative");
  detail::require(!u.noise_power || *u.noise_power > 0, "user " + std::to_string(u.user_id) + ": noise_power must be positive");
  validate(u.trajectory);
  validate(u.quality_model);
}

void validate(const SystemConfig& cfg) {
  detail::require(!cfg.users.empty(), "config needs at least one user");
  for (const auto& u : cfg.users) validate(u);
  detail::require(cfg.total_rate > 0, "total_rate must be positive");
  detail::require(cfg.bits_per_symbol >= 1, "bits_per_symbol must be positive");
  detail::require(cfg.alpha > 0, "alpha must be positive");
  detail::require(cfg.window_size >= 2, "window_size must be at least 2");
  detail::require(cfg.update_interval >= 1, "update_interval must be at least 1");
  detail::require(cfg.mc_samples >= 1, "mc_samples must be at least 1");
  detail::require(cfg.learning_rate > 0, "learning_rate must be positive");
  detail::require(cfg.slots >= 0, "slots must be nonnegative");
  detail::require(cfg.gp.sigma_floor > 0 && cfg.gp.sigma_init >= cfg.gp.sigma_floor, "gp sigma settings invalid");
  detail::require(cfg.gp.psi1_init > 0 && cfg.gp.psi2_init >= 0, "gp kernel initialization invalid");
  detail::require(cfg.gp.snr_max_db > cfg.gp.snr_min_db, "gp snr normalization range invalid");
  detail::require(cfg.gp.n_steps >= 0, "gp n_steps must be nonnegative");
  detail::require(cfg.gp.cold_start_slots >= 1, "gp cold_start_slots must be at least 1");
  ChannelParams probe = cfg.channel;
  validate(probe);
}

std::int64_t feature_length(double eps, std::int64_t source_dim) {
  detail::require(eps > 0 && eps <= 1, "compression ratio must lie in (0,1]");
  detail::require(source_dim >= 1, "source dimension must be at least 1");
  const double product = eps * static_cast<double>(source_dim);
  const double nearest = std::round(product);
  if (std::abs(product - nearest) <= 1e-9 * std::max(1.0, product)) return std::max<std::int64_t>(1, static_cast<std::int64_t>(nearest));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(product)));
}

double objective_value(std::span<const double> quality, std::span<const double> latency, double alpha, std::size_t n_users) {
  detail::require(quality.size() == latency.size(), "quality and latency differ in length");
  detail::require(n_users >= 1, "user count must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i < quality.size(); ++i) total += quality[i] - alpha * latency[i] / static_cast<double>(n_users);
  return total;
}

UserProfile template_user(std::size_t index) {
  struct Template {
    const char* dataset;
    double q_min;
    double length, width, height;
  };
  // Vehicle at ground level; aerial drone at 50 m; two ground-scene drones.
  static constexpr std::array<Template, 4> kTemplates{{
      {"bdd100k-like", 33.0, 100.0, 50.0, 0.0},
      {"mtdt-like", 33.0, 100.0, 100.0, 50.0},
      {"ubs-like", 26.0, 100.0, 150.0, 20.0},
      {"ubm-like", 26.0, 100.0, 150.0, 30.0},
  }};
  const auto& tpl = kTemplates[index % kTemplates.size()];
  UserProfile u;
  u.user_id = static_cast<int>(index) + 1;
  u.dataset = tpl.dataset;
  u.q_min = tpl.q_min;
  u.trajectory.length = tpl.length;
  u.trajectory.width = tpl.width;
  u.trajectory.height = tpl.height;
  u.quality_model = calibrate_default(tpl.dataset);
  u.cr_min = u.quality_model.cr_min;
  u.cr_max = u.quality_model.cr_max;
  return u;
}

SystemConfig default_config() {
  SystemConfig cfg;
  for (std::size_t i = 0; i < 4; ++i) cfg.users.push_back(template_user(i));
  return cfg;
}

}  // namespace semcom
