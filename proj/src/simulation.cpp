#include "semcom/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <Eigen/Core>

#include "semcom/errors.hpp"
#include "semcom/rate_allocator.hpp"
#include "semcom/semantic_env.hpp"

namespace semcom {

TimingStats timing_stats(std::span<const double> samples_ms) {
  TimingStats s;
  s.count = samples_ms.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : samples_ms) sum += v;
  s.mean_ms = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double v : samples_ms) sq += (v - s.mean_ms) * (v - s.mean_ms);
  s.std_ms = std::sqrt(sq / static_cast<double>(s.count));
  return s;
}

RunSummary compute_metrics(std::span<const SlotRecord> records) {
  detail::require(!records.empty(), "cannot summarize an empty record set");
  const std::size_t n_users = records.front().snr_db.size();
  RunSummary s;
  s.slots = records.size();
  s.users.assign(n_users, UserMetrics{0.0, 0.0, 0.0});

  for (const auto& r : records) {
    detail::require(r.snr_db.size() == n_users, "records disagree on the user count");
    for (std::size_t n = 0; n < n_users; ++n) {
      s.users[n].satisfaction_pct += r.satisfied[n] ? 1.0 : 0.0;
      s.users[n].mean_psnr_db += r.true_quality[n];
      s.users[n].mean_latency_ms += 1e3 * r.decision.latency[n];
    }
    s.total_objective += r.objective;
  }

  const auto slots = static_cast<double>(records.size());
  s.average = {0.0, 0.0, 0.0};
  for (auto& u : s.users) {
    u.satisfaction_pct *= 100.0 / slots;
    u.mean_psnr_db /= slots;
    u.mean_latency_ms /= slots;
    s.average.satisfaction_pct += u.satisfaction_pct / static_cast<double>(n_users);
    s.average.mean_psnr_db += u.mean_psnr_db / static_cast<double>(n_users);
    s.average.mean_latency_ms += u.mean_latency_ms / static_cast<double>(n_users);
  }
  s.total_objective /= slots;
  return s;
}

SimulationResult run_simulation(const SystemConfig& cfg, PolicyTag tag) {
  validate(cfg);
  const std::size_t n_users = cfg.users.size();

  std::vector<UserChannel> channels;
  std::vector<Rng> content_rngs;
  std::vector<Rng> oracle_rngs;
  Eigen::VectorXd source_dims(static_cast<Eigen::Index>(n_users));
  for (std::size_t n = 0; n < n_users; ++n) {
    const auto& u = cfg.users[n];
    const double noise = u.noise_power.value_or(calibrate_noise_power(u.trajectory, cfg.channel, cfg.target_snr_db));
    const auto uid = static_cast<std::uint64_t>(u.user_id);
    channels.emplace_back(u.trajectory, cfg.channel, noise, stream_seed(cfg.seed, uid, Stream::kChannel));
    content_rngs.push_back(make_rng(cfg.seed, uid, Stream::kContent));
    oracle_rngs.push_back(make_rng(cfg.seed, uid, Stream::kOracle));
    source_dims(static_cast<Eigen::Index>(n)) = static_cast<double>(u.source_dim);
  }

  auto policy = make_policy(tag, cfg);
  SimulationResult out;
  out.records.reserve(static_cast<std::size_t>(cfg.slots));
  std::vector<double> inference_ms;
  std::vector<double> update_ms;

  std::vector<double> snr(n_users);
  std::vector<SlotContent> content(n_users);
  for (std::int64_t t = 0; t < cfg.slots; ++t) {
    for (std::size_t n = 0; n < n_users; ++n) {
      snr[n] = channels[n].sample(t).db;
      content[n] = draw_slot_content(cfg.users[n].quality_model, content_rngs[n], oracle_rngs[n]);
    }

    SlotContext ctx{t, snr, [&](std::size_t n, double eps) {
                      return content[n].oracle_at(snr[n], eps, cfg.users[n].quality_model);
                    }};
    const auto start = std::chrono::steady_clock::now();
    PolicyDecision decision = policy->decide(ctx);
    inference_ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());

    const Eigen::Map<const Eigen::VectorXd> cr(decision.cr.data(), static_cast<Eigen::Index>(n_users));
    const auto alloc = allocate_rates(cr, source_dims, cfg.total_rate, cfg.bits_per_symbol);

    SlotRecord rec;
    rec.t = t;
    rec.snr_db = snr;
    rec.decision.cr = decision.cr;
    rec.decision.predicted_quality_mean = decision.predicted_mean;
    for (std::size_t n = 0; n < n_users; ++n) {
      const auto& u = cfg.users[n];
      const auto i = static_cast<Eigen::Index>(n);
      rec.decision.rate.push_back(alloc.rates(i));
      rec.decision.latency.push_back(alloc.latencies(i));
      rec.decision.feature_len.push_back(feature_length(decision.cr[n], u.source_dim));
      rec.true_quality.push_back(content[n].true_at(snr[n], decision.cr[n], u.quality_model));
      rec.oracle_quality.push_back(content[n].oracle_at(snr[n], decision.cr[n], u.quality_model));
      rec.satisfied.push_back(rec.true_quality.back() >= u.q_min);
    }
    rec.objective = objective_value(rec.true_quality, rec.decision.latency, cfg.alpha, n_users);

    policy->observe(t, rec.decision.cr, snr, rec.oracle_quality);
    if (auto ms = policy->last_update_ms()) update_ms.push_back(*ms);
    out.records.push_back(std::move(rec));
  }

  if (out.records.empty()) {
    out.summary.users.assign(n_users, UserMetrics{});
    out.summary.average = UserMetrics{};
  } else {
    out.summary = compute_metrics(out.records);
  }
  out.summary.policy = std::string(to_string(tag));
  out.summary.inference = timing_stats(inference_ms);
  out.summary.update = timing_stats(update_ms);
  return out;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "alpha") return SweepParameter::kAlpha;
  if (name == "q_min_vector" || name == "q_min") return SweepParameter::kQMinVector;
  if (name == "n_users") return SweepParameter::kUsers;
  throw InvalidArgument("unknown sweep parameter: " + std::string(name));
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kAlpha: return "alpha";
    case SweepParameter::kQMinVector: return "q_min_vector";
    case SweepParameter::kUsers: return "n_users";
  }
  return "unknown";
}

namespace {

double parse_double(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

}  // namespace

SystemConfig apply_sweep_value(const SystemConfig& base, SweepParameter p, std::string_view value) {
  SystemConfig cfg = base;
  switch (p) {
    case SweepParameter::kAlpha:
      cfg.alpha = parse_double(value);
      break;
    case SweepParameter::kQMinVector: {
      std::vector<double> q;
      std::stringstream ss{std::string(value)};
      for (std::string item; std::getline(ss, item, ',');) q.push_back(parse_double(item));
      detail::require(q.size() == cfg.users.size(), "q_min vector length differs from the user count");
      for (std::size_t n = 0; n < q.size(); ++n) cfg.users[n].q_min = q[n];
      break;
    }
    case SweepParameter::kUsers: {
      const double count = parse_double(value);
      detail::require(count >= 1 && count == std::floor(count), "n_users must be a positive integer");
      const auto n = static_cast<std::size_t>(count);
      cfg.users.clear();
      for (std::size_t i = 0; i < n; ++i) cfg.users.push_back(template_user(i));
      cfg.total_rate = base.total_rate * static_cast<double>(n) / static_cast<double>(base.users.size());
      break;
    }
  }
  validate(cfg);
  return cfg;
}

std::vector<SweepRow> sweep(const SystemConfig& base, PolicyTag policy, SweepParameter p,
                            std::span<const std::string> values) {
  detail::require(!values.empty(), "sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const auto& v : values) rows.push_back({v, run_simulation(apply_sweep_value(base, p, v), policy).summary});
  return rows;
}

}  // namespace semcom
