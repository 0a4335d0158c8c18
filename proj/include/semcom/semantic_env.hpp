#pragma once

// Synthetic reconstruction-quality environment standing in for a JSCC codec
// and its transmitter-side quality oracle.
//
//   Qbar(snr, eps) = q_floor + (q_ceil(eps) - q_floor) * S(snr)
//   S(snr)         = 1 / (1 + exp(-snr_slope (snr - snr_mid)))
//   q_ceil(eps)    = q_ceil_max_cr - (q_ceil_max_cr - q_ceil_min_cr) * (e^{-k x} - e^{-k}) / (1 - e^{-k})
//
// with x = (eps - cr_min) / (cr_max - cr_min), so q_ceil hits both end-point
// ceilings exactly.

#include <string>
#include <string_view>
#include <vector>

#include "semcom/random.hpp"

namespace semcom {

struct QualityModel {
  double q_floor{15.0};
  double q_ceil_min_cr{29.0};
  double q_ceil_max_cr{40.0};
  double snr_mid{0.0};
  double snr_slope{0.2};
  double cr_sat{6.0};
  double content_noise_std{0.6};
  double oracle_error_bound{1.0};
  double cr_min{1.0 / 30.0};
  double cr_max{3.0 / 10.0};
};

void validate(const QualityModel& model);

double mean_quality(double snr_db, double eps, const QualityModel& model);

/// Qbar plus Gaussian content noise.
double true_quality(double snr_db, double eps, const QualityModel& model, Rng& rng);

/// True quality plus a prediction error uniform on [-bound, bound].
double oracle_predict(double true_quality_db, const QualityModel& model, Rng& rng);

/// One slot's content realization for one user. The oracle sees the same
/// content as the decoder, so both qualities share the content noise and
/// differ only by the bounded prediction error.
struct SlotContent {
  double content_noise{0.0};
  double oracle_error{0.0};

  double true_at(double snr_db, double eps, const QualityModel& model) const {
    return mean_quality(snr_db, eps, model) + content_noise;
  }
  double oracle_at(double snr_db, double eps, const QualityModel& model) const {
    return true_at(snr_db, eps, model) + oracle_error;
  }
};

SlotContent draw_slot_content(const QualityModel& model, Rng& content_rng, Rng& oracle_rng);

/// Committed calibration for one of the dataset tags
/// {bdd100k-like, mtdt-like, ubs-like, ubm-like}.
QualityModel calibrate_default(std::string_view dataset_tag);

std::vector<std::string> dataset_tags();

}  // namespace semcom
