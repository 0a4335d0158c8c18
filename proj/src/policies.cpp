#include "semcom/policies.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "semcom/errors.hpp"

namespace semcom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> constant_cr(const std::vector<UserProfile>& users, bool use_max) {
  std::vector<double> cr;
  cr.reserve(users.size());
  for (const auto& u : users) cr.push_back(use_max ? u.cr_max : u.cr_min);
  return cr;
}

class ConstantPolicy final : public Policy {
 public:
  ConstantPolicy(PolicyTag tag, const SystemConfig& cfg) : tag_(tag), cr_(constant_cr(cfg.users, tag == PolicyTag::kPsnrMax)) {}

  PolicyTag tag() const override { return tag_; }
  PolicyDecision decide(const SlotContext&) override { return {cr_, std::vector<double>(cr_.size(), kNaN)}; }

 private:
  PolicyTag tag_;
  std::vector<double> cr_;
};

class PsnrFeasiblePolicy final : public Policy {
 public:
  explicit PsnrFeasiblePolicy(const SystemConfig& cfg) : users_(cfg.users) {}

  PolicyTag tag() const override { return PolicyTag::kPsnrFeasible; }

  PolicyDecision decide(const SlotContext& ctx) override {
    detail::require(static_cast<bool>(ctx.oracle), "psnr_feasible needs an oracle");
    PolicyDecision d;
    for (std::size_t n = 0; n < users_.size(); ++n) {
      const auto predict = [&](double eps) { return ctx.oracle(n, eps); };
      const double eps = lowest_feasible_cr(predict, {users_[n].cr_min, users_[n].cr_max}, users_[n].q_min_eff());
      d.cr.push_back(eps);
      d.predicted_mean.push_back(predict(eps));
    }
    return d;
  }

 private:
  std::vector<UserProfile> users_;
};

}  // namespace

std::string_view to_string(PolicyTag tag) {
  switch (tag) {
    case PolicyTag::kProposed: return "proposed";
    case PolicyTag::kPsnrMax: return "psnr_max";
    case PolicyTag::kLatencyMin: return "latency_min";
    case PolicyTag::kPsnrFeasible: return "psnr_feasible";
  }
  return "unknown";
}

PolicyTag parse_policy_tag(std::string_view name) {
  for (auto tag : all_policies()) {
    if (to_string(tag) == name) return tag;
  }
  throw InvalidArgument("unknown policy: " + std::string(name));
}

std::vector<PolicyTag> all_policies() {
  return {PolicyTag::kProposed, PolicyTag::kPsnrMax, PolicyTag::kLatencyMin, PolicyTag::kPsnrFeasible};
}

double lowest_feasible_cr(const std::function<double(double)>& predict, CrBounds bounds, double q_min_eff,
                          double resolution) {
  if (predict(bounds.lo) >= q_min_eff) return bounds.lo;
  if (predict(bounds.hi) < q_min_eff) return bounds.hi;
  double lo = bounds.lo;  // infeasible
  double hi = bounds.hi;  // feasible
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (predict(mid) >= q_min_eff ? hi : lo) = mid;
  }
  return hi;
}

ProposedPolicy::ProposedPolicy(const SystemConfig& cfg)
    : users_(cfg.users),
      update_interval_(cfg.update_interval),
      cold_start_slots_(cfg.gp.cold_start_slots),
      rng_(make_rng(cfg.seed, 0, Stream::kAcquisition)) {
  acquisition_ = {cfg.mc_samples, cfg.alpha, cfg.total_rate, cfg.bits_per_symbol};
  update_settings_.sigma_floor = cfg.gp.sigma_floor;
  update_settings_.log_space = cfg.gp.log_step;
  update_settings_.n_steps = cfg.gp.n_steps;
  for (const auto& u : users_) {
    betas_.push_back(confidence_to_beta(u.confidence));
    gp::HyperParams<double> params{cfg.gp.psi1_init, cfg.gp.psi2_init, cfg.gp.sigma_init, cfg.learning_rate};
    gp::InputNormalizer<double> normalizer{u.cr_min, u.cr_max, cfg.gp.snr_min_db, cfg.gp.snr_max_db,
                                                 cfg.gp.log_cr};
    gps_.push_back({gp::ObservationWindow<double>(static_cast<std::size_t>(cfg.window_size)), params, normalizer});
  }
}

bool ProposedPolicy::warmed_up() const {
  for (const auto& g : gps_) {
    if (g.window.size() < static_cast<std::size_t>(cold_start_slots_)) return false;
  }
  return true;
}

PolicyDecision ProposedPolicy::decide(const SlotContext& ctx) {
  detail::require(ctx.snr_db.size() == users_.size(), "snr vector differs from the user count");
  if (!warmed_up()) return {constant_cr(users_, true), std::vector<double>(users_.size(), kNaN)};

  std::vector<gp::PosteriorModel<double>> models;
  models.reserve(users_.size());
  for (const auto& g : gps_) models.emplace_back(g.window, g.params);

  std::vector<UserSurrogate> surrogates;
  for (std::size_t n = 0; n < users_.size(); ++n) {
    const auto& u = users_[n];
    surrogates.push_back({&models[n], gps_[n].normalizer, ctx.snr_db[n], u.q_min_eff(), betas_[n], {u.cr_min, u.cr_max},
                          u.source_dim});
  }
  last_ = select_cr(surrogates, acquisition_, rng_);
  return {last_.cr, last_.predicted_mean};
}

void ProposedPolicy::observe(std::int64_t t, std::span<const double> cr, std::span<const double> snr_db,
                             std::span<const double> oracle_quality) {
  detail::require(cr.size() == gps_.size() && snr_db.size() == gps_.size() && oracle_quality.size() == gps_.size(),
                  "observation width differs from the user count");
  for (std::size_t n = 0; n < gps_.size(); ++n) {
    gps_[n].window.push(gps_[n].normalizer(cr[n], snr_db[n]), oracle_quality[n]);
  }

  last_update_ms_.reset();
  if (t == 0 || t % update_interval_ != 0) return;
  const auto start = std::chrono::steady_clock::now();
  for (auto& g : gps_) {
    if (g.window.size() >= 2) g.params = gp::update_hyperparams(g.window, g.params, update_settings_);
  }
  last_update_ms_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  ++updates_;
}

std::unique_ptr<Policy> make_policy(PolicyTag tag, const SystemConfig& cfg) {
  switch (tag) {
    case PolicyTag::kProposed: return std::make_unique<ProposedPolicy>(cfg);
    case PolicyTag::kPsnrMax:
    case PolicyTag::kLatencyMin: return std::make_unique<ConstantPolicy>(tag, cfg);
    case PolicyTag::kPsnrFeasible: return std::make_unique<PsnrFeasiblePolicy>(cfg);
  }
  throw InvalidArgument("unknown policy tag");
}

}  // namespace semcom
