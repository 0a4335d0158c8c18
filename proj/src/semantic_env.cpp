#include "semcom/semantic_env.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "quality_models_data.hpp"
#include "semcom/errors.hpp"

namespace semcom {

namespace {

constexpr double kCrTolerance = 1e-12;

const nlohmann::json& calibration_table() {
  static const nlohmann::json table = nlohmann::json::parse(kQualityModelsJson);
  return table;
}

}  // namespace

void validate(const QualityModel& m) {
  detail::require(m.q_floor < m.q_ceil_min_cr && m.q_ceil_min_cr <= m.q_ceil_max_cr,
                  "quality model needs q_floor < q_ceil_min_cr <= q_ceil_max_cr");
  detail::require(m.snr_slope > 0, "snr_slope must be positive");
  detail::require(m.cr_sat > 0, "cr_sat must be positive");
  detail::require(m.content_noise_std >= 0, "content_noise_std must be nonnegative");
  detail::require(m.oracle_error_bound >= 0, "oracle_error_bound must be nonnegative");
  detail::require(m.cr_min > 0 && m.cr_min < m.cr_max && m.cr_max <= 1, "quality model needs 0 < cr_min < cr_max <= 1");
}

double mean_quality(double snr_db, double eps, const QualityModel& m) {
  detail::require(eps >= m.cr_min - kCrTolerance && eps <= m.cr_max + kCrTolerance,
                  "compression ratio outside the model's range");
  const double x = (eps - m.cr_min) / (m.cr_max - m.cr_min);
  const double tail = std::exp(-m.cr_sat);
  const double remaining = (std::exp(-m.cr_sat * x) - tail) / (1.0 - tail);
  const double ceiling = m.q_ceil_max_cr - (m.q_ceil_max_cr - m.q_ceil_min_cr) * remaining;
  const double saturation = 1.0 / (1.0 + std::exp(-m.snr_slope * (snr_db - m.snr_mid)));
  return m.q_floor + (ceiling - m.q_floor) * saturation;
}

double true_quality(double snr_db, double eps, const QualityModel& m, Rng& rng) {
  const double mean = mean_quality(snr_db, eps, m);
  if (m.content_noise_std == 0.0) return mean;
  std::normal_distribution<double> noise(0.0, m.content_noise_std);
  return mean + noise(rng);
}

double oracle_predict(double true_quality_db, const QualityModel& m, Rng& rng) {
  if (m.oracle_error_bound == 0.0) return true_quality_db;
  std::uniform_real_distribution<double> error(-m.oracle_error_bound, m.oracle_error_bound);
  return true_quality_db + error(rng);
}

SlotContent draw_slot_content(const QualityModel& m, Rng& content_rng, Rng& oracle_rng) {
  SlotContent c;
  if (m.content_noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, m.content_noise_std);
    c.content_noise = noise(content_rng);
  }
  c.oracle_error = oracle_predict(0.0, m, oracle_rng);
  return c;
}

QualityModel calibrate_default(std::string_view dataset_tag) {
  const auto& models = calibration_table().at("models");
  const auto it = models.find(std::string(dataset_tag));
  if (it == models.end()) throw InvalidArgument("unknown dataset tag: " + std::string(dataset_tag));
  const auto& j = *it;
  QualityModel m;
  m.q_floor = j.at("q_floor").get<double>();
  m.q_ceil_min_cr = j.at("q_ceil_min_cr").get<double>();
  m.q_ceil_max_cr = j.at("q_ceil_max_cr").get<double>();
  m.snr_mid = j.at("snr_mid").get<double>();
  m.snr_slope = j.at("snr_slope").get<double>();
  m.cr_sat = j.at("cr_sat").get<double>();
  m.content_noise_std = j.at("content_noise_std").get<double>();
  m.oracle_error_bound = j.at("oracle_error_bound").get<double>();
  m.cr_min = j.at("cr_min").get<double>();
  m.cr_max = j.at("cr_max").get<double>();
  validate(m);
  return m;
}

std::vector<std::string> dataset_tags() {
  std::vector<std::string> tags;
  for (const auto& [tag, _] : calibration_table().at("models").items()) tags.push_back(tag);
  return tags;
}

}  // namespace semcom
