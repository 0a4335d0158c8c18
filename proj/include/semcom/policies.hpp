#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semcom/acquisition.hpp"
#include "semcom/core.hpp"
#include "semcom/gp.hpp"

namespace semcom {

enum class PolicyTag { kProposed, kPsnrMax, kLatencyMin, kPsnrFeasible };

std::string_view to_string(PolicyTag tag);
PolicyTag parse_policy_tag(std::string_view name);
std::vector<PolicyTag> all_policies();

/// What a policy sees when deciding slot t.
struct SlotContext {
  std::int64_t t{0};
  std::span<const double> snr_db;
  /// Transmitter-side quality prediction for user n at CR eps in this slot.
  std::function<double(std::size_t, double)> oracle;
};

struct PolicyDecision {
  std::vector<double> cr;
  std::vector<double> predicted_mean;  // NaN when the policy makes no prediction
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyTag tag() const = 0;
  virtual PolicyDecision decide(const SlotContext& ctx) = 0;
  /// Feedback after transmission: the oracle's quality for the chosen CRs.
  virtual void observe(std::int64_t /*t*/, std::span<const double> /*cr*/, std::span<const double> /*snr_db*/,
                       std::span<const double> /*oracle_quality*/) {}
  /// Wall time of the hyperparameter update triggered by the last observe, if any.
  virtual std::optional<double> last_update_ms() const { return std::nullopt; }
};

/// Lowest CR in `bounds` whose predicted quality clears `q_min_eff`, by
/// bisection down to `resolution`; bounds.hi when even that falls short.
double lowest_feasible_cr(const std::function<double(double)>& predict, CrBounds bounds, double q_min_eff,
                          double resolution = 1e-4);

/// Per-user GP state of the proposed controller.
struct UserGp {
  gp::ObservationWindow<double> window;
  gp::HyperParams<double> params;
  gp::InputNormalizer<double> normalizer;
};

class ProposedPolicy final : public Policy {
 public:
  explicit ProposedPolicy(const SystemConfig& cfg);

  PolicyTag tag() const override { return PolicyTag::kProposed; }
  PolicyDecision decide(const SlotContext& ctx) override;
  void observe(std::int64_t t, std::span<const double> cr, std::span<const double> snr_db,
               std::span<const double> oracle_quality) override;
  std::optional<double> last_update_ms() const override { return last_update_ms_; }

  const std::vector<UserGp>& gps() const { return gps_; }
  bool warmed_up() const;
  int hyperparameter_updates() const { return updates_; }
  const AcquisitionResult& last_acquisition() const { return last_; }

 private:
  std::vector<UserProfile> users_;
  std::vector<double> betas_;
  std::vector<UserGp> gps_;
  AcquisitionSettings acquisition_;
  gp::UpdateSettings<double> update_settings_;
  int update_interval_;
  int cold_start_slots_;
  Rng rng_;
  AcquisitionResult last_{};
  std::optional<double> last_update_ms_;
  int updates_{0};
};

std::unique_ptr<Policy> make_policy(PolicyTag tag, const SystemConfig& cfg);

}  // namespace semcom
