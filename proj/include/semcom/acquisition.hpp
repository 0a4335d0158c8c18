#pragma once

// Constrained Monte-Carlo acquisition. A confidence level c turns the chance
// constraint P(Q >= q) >= c into mu - beta sigma >= q with beta = Phi^{-1}(c);
// the joint CR vector is the best-scoring feasible one among M uniform draws.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "semcom/gp.hpp"
#include "semcom/random.hpp"

namespace semcom {

/// Standard normal CDF.
double normal_cdf(double x);

/// Phi^{-1}(c): Acklam's rational approximation polished by one Halley step.
double confidence_to_beta(double c);

bool constraint_satisfied(const gp::Posterior<double>& post, double q_min_eff, double beta);

/// Bounds of one user's CR search interval.
struct CrBounds {
  double lo{1.0 / 30.0};
  double hi{3.0 / 10.0};
};

/// M x N matrix; row m is the m-th joint candidate.
Eigen::MatrixXd sample_candidates(std::span<const CrBounds> bounds, int m, Rng& rng);

/// What the acquisition needs to know about one user this slot.
struct UserSurrogate {
  const gp::PosteriorModel<double>* model{nullptr};
  gp::InputNormalizer<double> normalizer{};
  double snr_db{0.0};
  double q_min_eff{0.0};
  double beta{0.0};
  CrBounds bounds{};
  std::int64_t source_dim{1};
};

struct AcquisitionSettings {
  int mc_samples{10000};
  double alpha{200.0};
  double total_rate{400e6};
  int bits_per_symbol{64};
};

struct AcquisitionResult {
  std::vector<double> cr;
  std::vector<double> predicted_mean;
  bool feasible{false};
  int evaluated{0};
  double best_surrogate_objective{0.0};
};

/// Per-candidate scores for a fixed candidate matrix.
struct CandidateScores {
  Eigen::VectorXd objective;  // sum_n mu_n - latency penalty
  Eigen::VectorXd min_slack;  // min_n (mu_n - beta_n sigma_n - q_min_eff_n)
  Eigen::MatrixXd mean;       // M x N posterior means
};

CandidateScores score_candidates(std::span<const UserSurrogate> users, const Eigen::MatrixXd& candidates,
                                 const AcquisitionSettings& settings);

/// Feasible argmax of the surrogate objective over the rows of `candidates`;
/// when nothing is feasible, the row with the largest minimum slack. Ties go
/// to the lowest row index.
AcquisitionResult select_from(std::span<const UserSurrogate> users, const Eigen::MatrixXd& candidates,
                              const AcquisitionSettings& settings);

/// sample_candidates followed by select_from.
AcquisitionResult select_cr(std::span<const UserSurrogate> users, const AcquisitionSettings& settings, Rng& rng);

}  // namespace semcom
