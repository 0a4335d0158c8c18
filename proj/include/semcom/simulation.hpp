#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semcom/core.hpp"
#include "semcom/policies.hpp"

namespace semcom {

struct UserMetrics {
  double satisfaction_pct{100.0};
  double mean_psnr_db{0.0};
  double mean_latency_ms{0.0};
};

struct TimingStats {
  double mean_ms{0.0};
  double std_ms{0.0};
  std::size_t count{0};
};

TimingStats timing_stats(std::span<const double> samples_ms);

struct RunSummary {
  std::string policy;
  std::size_t slots{0};
  std::vector<UserMetrics> users;
  UserMetrics average;
  double total_objective{0.0};  // per-slot objective averaged over slots
  TimingStats update;
  TimingStats inference;
};

struct SimulationResult {
  std::vector<SlotRecord> records;
  RunSummary summary;
};

/// Per-user and averaged metrics over a nonempty record set.
RunSummary compute_metrics(std::span<const SlotRecord> records);

/// Online loop: fade, decide, allocate, transmit, observe. Every policy sees
/// the same channel and content realizations for a given seed.
SimulationResult run_simulation(const SystemConfig& cfg, PolicyTag policy);

enum class SweepParameter { kAlpha, kQMinVector, kUsers };

SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

/// `base` with one sweep value applied. q_min vectors are comma-separated;
/// user counts cycle the four template users and scale the total rate with
/// the count so the per-user budget is unchanged.
SystemConfig apply_sweep_value(const SystemConfig& base, SweepParameter p, std::string_view value);

struct SweepRow {
  std::string value;
  RunSummary summary;
};

std::vector<SweepRow> sweep(const SystemConfig& base, PolicyTag policy, SweepParameter p,
                            std::span<const std::string> values);

}  // namespace semcom
