#include "semcom/acquisition.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "semcom/errors.hpp"

namespace semcom {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double confidence_to_beta(double c) {
  detail::require(c > 0.0 && c < 1.0, "confidence must lie in (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  static constexpr double cc[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                  -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (c < p_low) {
    const double q = std::sqrt(-2.0 * std::log(c));
    x = (((((cc[0] * q + cc[1]) * q + cc[2]) * q + cc[3]) * q + cc[4]) * q + cc[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (c <= 1.0 - p_low) {
    const double q = c - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-c));
    x = -(((((cc[0] * q + cc[1]) * q + cc[2]) * q + cc[3]) * q + cc[4]) * q + cc[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement brings the ~1e-9 relative error of the rational form
  // down to round-off.
  const double e = normal_cdf(x) - c;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

bool constraint_satisfied(const gp::Posterior<double>& post, double q_min_eff, double beta) {
  return post.mean - beta * post.stddev() >= q_min_eff;
}

Eigen::MatrixXd sample_candidates(std::span<const CrBounds> bounds, int m, Rng& rng) {
  detail::require(m >= 0, "candidate count must be nonnegative");
  const auto n = static_cast<Eigen::Index>(bounds.size());
  Eigen::MatrixXd out(m, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index row = 0; row < m; ++row) {
    for (Eigen::Index col = 0; col < n; ++col) {
      const auto& b = bounds[static_cast<std::size_t>(col)];
      out(row, col) = b.lo + (b.hi - b.lo) * unit(rng);
    }
  }
  return out;
}

CandidateScores score_candidates(std::span<const UserSurrogate> users, const Eigen::MatrixXd& candidates,
                                 const AcquisitionSettings& settings) {
  const Eigen::Index m = candidates.rows();
  const auto n = static_cast<Eigen::Index>(users.size());
  detail::require(candidates.cols() == n, "candidate width differs from the user count");
  if (m == 0) throw EmptyCandidateSet();

  CandidateScores s;
  s.mean.resize(m, n);
  s.min_slack = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  Eigen::VectorXd root_sum = Eigen::VectorXd::Zero(m);

  for (Eigen::Index col = 0; col < n; ++col) {
    const auto& user = users[static_cast<std::size_t>(col)];
    detail::require(user.model != nullptr, "user surrogate has no posterior model");
    const double snr = user.normalizer.snr(user.snr_db);
    for (Eigen::Index row = 0; row < m; ++row) {
      const double eps = candidates(row, col);
      const auto post = (*user.model)(gp::Input<double>(user.normalizer.cr(eps), snr));
      s.mean(row, col) = post.mean;
      const double slack = post.mean - user.beta * post.stddev() - user.q_min_eff;
      s.min_slack(row) = std::min(s.min_slack(row), slack);
      root_sum(row) += std::sqrt(std::max(eps, 1e-9) * static_cast<double>(user.source_dim));
    }
  }

  const double penalty_scale =
      settings.alpha * settings.bits_per_symbol / (static_cast<double>(n) * settings.total_rate);
  s.objective = s.mean.rowwise().sum() - penalty_scale * root_sum.array().square().matrix();
  return s;
}

AcquisitionResult select_from(std::span<const UserSurrogate> users, const Eigen::MatrixXd& candidates,
                              const AcquisitionSettings& settings) {
  const CandidateScores s = score_candidates(users, candidates, settings);
  const Eigen::Index m = candidates.rows();

  Eigen::Index best = -1;
  for (Eigen::Index row = 0; row < m; ++row) {
    if (s.min_slack(row) >= 0.0 && (best < 0 || s.objective(row) > s.objective(best))) best = row;
  }
  AcquisitionResult out;
  out.feasible = best >= 0;
  if (!out.feasible) {
    best = 0;
    for (Eigen::Index row = 1; row < m; ++row) {
      if (s.min_slack(row) > s.min_slack(best)) best = row;
    }
  }
  out.evaluated = static_cast<int>(m);
  out.best_surrogate_objective = s.objective(best);
  out.cr.resize(static_cast<std::size_t>(candidates.cols()));
  out.predicted_mean.resize(out.cr.size());
  for (Eigen::Index col = 0; col < candidates.cols(); ++col) {
    out.cr[static_cast<std::size_t>(col)] = candidates(best, col);
    out.predicted_mean[static_cast<std::size_t>(col)] = s.mean(best, col);
  }
  return out;
}

AcquisitionResult select_cr(std::span<const UserSurrogate> users, const AcquisitionSettings& settings, Rng& rng) {
  if (settings.mc_samples <= 0) throw EmptyCandidateSet();
  std::vector<CrBounds> bounds;
  bounds.reserve(users.size());
  for (const auto& u : users) bounds.push_back(u.bounds);
  return select_from(users, sample_candidates(bounds, settings.mc_samples, rng), settings);
}

}  // namespace semcom
