#pragma once

// Gaussian-process surrogate over (compression ratio, SNR dB) inputs with the
// polynomial kernel k(v, v') = psi1 * (v . v' + psi2).
//
// Inputs are normalized to the unit box before they enter the kernel; the
// window stores normalized inputs. All solves go through a Cholesky factor of
// Sigma = K + sigma_obs^2 I.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "semcom/errors.hpp"

namespace semcom::gp {

template <typename Scalar>
using Input = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using InputMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Gradient = Eigen::Matrix<Scalar, 3, 1>;  // (d/dpsi1, d/dpsi2, d/dsigma_obs)

template <typename Scalar>
struct HyperParams {
  Scalar psi1{1};
  Scalar psi2{1};
  Scalar sigma_obs{0.5};
  Scalar eta{0.01};

  Gradient<Scalar> as_vector() const { return {psi1, psi2, sigma_obs}; }
};

/// Optimizer controls for update_hyperparams.
template <typename Scalar>
struct UpdateSettings {
  Scalar sigma_floor{1e-3};
  Scalar psi1_floor{1e-6};
  int n_steps{5};
  int max_backtracks{10};
  // Ascend in log-parameter space (step eta * psi * dL/dpsi); scale-free, so one
  // oversized step on sigma cannot strand the optimizer on a flat plateau.
  bool log_space{false};
  Scalar max_log_step{1};  // per-step cap on |delta log psi| in log_space mode
};

/// Affine map of (cr, snr_db) onto the unit box.
template <typename Scalar>
struct InputNormalizer {
  Scalar cr_min{Scalar(1) / 30};
  Scalar cr_max{Scalar(3) / 10};
  Scalar snr_min_db{0};
  Scalar snr_max_db{30};
  // Log spacing lets the affine kernel bend with the concave low-CR quality drop.
  bool log_cr{false};

  Scalar cr(Scalar eps) const {
    if (log_cr) return std::log(eps / cr_min) / std::log(cr_max / cr_min);
    return (eps - cr_min) / (cr_max - cr_min);
  }
  Scalar snr(Scalar snr_db) const { return (snr_db - snr_min_db) / (snr_max_db - snr_min_db); }
  Input<Scalar> operator()(Scalar eps, Scalar snr_db) const { return {cr(eps), snr(snr_db)}; }
};

template <typename Scalar>
struct Observation {
  Input<Scalar> v;
  Scalar y;
};

/// FIFO window of the newest `capacity` observations.
template <typename Scalar>
class ObservationWindow {
 public:
  explicit ObservationWindow(std::size_t capacity) : capacity_(capacity) {
    semcom::detail::require(capacity >= 1, "window capacity must be at least 1");
  }

  void push(const Input<Scalar>& v, Scalar y) {
    if (entries_.size() == capacity_) entries_.pop_front();
    entries_.push_back({v, y});
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  const Observation<Scalar>& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  InputMatrix<Scalar> inputs() const {
    InputMatrix<Scalar> x(static_cast<Eigen::Index>(size()), 2);
    for (std::size_t i = 0; i < size(); ++i) x.row(static_cast<Eigen::Index>(i)) = entries_[i].v.transpose();
    return x;
  }

  Vector<Scalar> targets() const {
    Vector<Scalar> y(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) y(static_cast<Eigen::Index>(i)) = entries_[i].y;
    return y;
  }

 private:
  std::deque<Observation<Scalar>> entries_;
  std::size_t capacity_;
};

template <typename Scalar>
struct Posterior {
  Scalar mean{0};
  Scalar variance{0};

  Scalar stddev() const { return std::sqrt(variance); }
};

template <typename Scalar>
Scalar kernel(const Input<Scalar>& a, const Input<Scalar>& b, const HyperParams<Scalar>& params) {
  return params.psi1 * (a(0) * b(0) + a(1) * b(1) + params.psi2);
}

/// Kernel matrix of the rows of `inputs`. The upper triangle is mirrored from
/// the lower one, so symmetry is bit-exact.
template <typename Scalar>
Matrix<Scalar> gram_matrix(const InputMatrix<Scalar>& inputs, const HyperParams<Scalar>& params) {
  const Eigen::Index t = inputs.rows();
  Matrix<Scalar> k(t, t);
  for (Eigen::Index j = 0; j < t; ++j) {
    for (Eigen::Index i = j; i < t; ++i) {
      const Input<Scalar> a = inputs.row(i).transpose();
      const Input<Scalar> b = inputs.row(j).transpose();
      k(i, j) = kernel(a, b, params);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

/// Sigma = K + sigma_obs^2 I.
template <typename Scalar>
Matrix<Scalar> noisy_covariance(const InputMatrix<Scalar>& inputs, const HyperParams<Scalar>& params) {
  Matrix<Scalar> sigma = gram_matrix(inputs, params);
  sigma.diagonal().array() += params.sigma_obs * params.sigma_obs;
  return sigma;
}

namespace detail {

template <typename Scalar>
Eigen::LLT<Matrix<Scalar>> factorize(const Matrix<Scalar>& sigma) {
  Eigen::LLT<Matrix<Scalar>> llt(sigma);
  if (llt.info() != Eigen::Success) throw SingularCovariance();
  // LLT reports success on some indefinite inputs; a nonpositive pivot is
  // the reliable signal.
  const auto diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > Scalar(0)) || !std::isfinite(diag(i))) throw SingularCovariance();
  }
  return llt;
}

}  // namespace detail

/// Posterior of the latent quality at `query` given the window. Solves against
/// the Cholesky factor per call; use PosteriorModel to amortize over queries.
template <typename Scalar>
Posterior<Scalar> posterior(const ObservationWindow<Scalar>& window, const HyperParams<Scalar>& params,
                            const Input<Scalar>& query) {
  if (window.empty()) throw EmptyWindow();
  const InputMatrix<Scalar> x = window.inputs();
  const auto llt = detail::factorize<Scalar>(noisy_covariance(x, params));

  Vector<Scalar> k_star(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) k_star(i) = kernel<Scalar>(x.row(i).transpose(), query, params);

  const Vector<Scalar> alpha = llt.solve(window.targets());
  const Vector<Scalar> w = llt.matrixL().solve(k_star);
  const Scalar prior = kernel(query, query, params);
  return {k_star.dot(alpha), std::max(Scalar(0), prior - w.squaredNorm())};
}

/// Posterior with the factorization computed once.
///
/// Because the kernel is affine in each argument, k(X, v*) = psi1 * B u* with
/// B = [X | 1] and u* = (v*, psi2). The projected basis C = L^{-1} B turns the
/// variance reduction into a 3x3 quadratic form, so each query is O(1) after
/// an O(t^3) setup.
template <typename Scalar>
class PosteriorModel {
 public:
  PosteriorModel(const ObservationWindow<Scalar>& window, const HyperParams<Scalar>& params) : params_(params) {
    if (window.empty()) throw EmptyWindow();
    const InputMatrix<Scalar> x = window.inputs();
    const auto llt = detail::factorize<Scalar>(noisy_covariance(x, params));
    const Vector<Scalar> alpha = llt.solve(window.targets());

    Matrix<Scalar> basis(x.rows(), 3);
    basis.template leftCols<2>() = x;
    basis.col(2).setOnes();
    // Mean weights: mu(v*) = psi1 * u*^T (B^T alpha).
    mean_weights_ = params.psi1 * (basis.transpose() * alpha);
    const Matrix<Scalar> projected = llt.matrixL().solve(basis);
    reduction_ = params.psi1 * params.psi1 * (projected.transpose() * projected);
  }

  Posterior<Scalar> operator()(const Input<Scalar>& query) const {
    const Eigen::Matrix<Scalar, 3, 1> u(query(0), query(1), params_.psi2);
    const Scalar prior = params_.psi1 * (query.squaredNorm() + params_.psi2);
    const Scalar variance = prior - u.dot(reduction_ * u);
    return {mean_weights_.dot(u), std::max(Scalar(0), variance)};
  }

  /// Unclamped variance, for checking the size of round-off negativity.
  Scalar raw_variance(const Input<Scalar>& query) const {
    const Eigen::Matrix<Scalar, 3, 1> u(query(0), query(1), params_.psi2);
    return params_.psi1 * (query.squaredNorm() + params_.psi2) - u.dot(reduction_ * u);
  }

  const HyperParams<Scalar>& params() const { return params_; }

 private:
  HyperParams<Scalar> params_;
  Eigen::Matrix<Scalar, 3, 1> mean_weights_;
  Eigen::Matrix<Scalar, 3, 3> reduction_;
};

/// log p(y | X, psi) = -1/2 y^T Sigma^{-1} y - 1/2 log|Sigma| - t/2 log(2 pi).
template <typename Scalar>
Scalar log_marginal_likelihood(const ObservationWindow<Scalar>& window, const HyperParams<Scalar>& params) {
  if (window.empty()) throw EmptyWindow();
  const auto llt = detail::factorize<Scalar>(noisy_covariance(window.inputs(), params));
  const Vector<Scalar> y = window.targets();
  const Vector<Scalar> alpha = llt.solve(y);
  const Scalar half_log_det = llt.matrixLLT().diagonal().array().log().sum();
  const auto t = static_cast<Scalar>(window.size());
  return Scalar(-0.5) * y.dot(alpha) - half_log_det - Scalar(0.5) * t * std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
}

/// dL/dpsi = 1/2 alpha^T (dSigma/dpsi) alpha - 1/2 tr(Sigma^{-1} dSigma/dpsi), alpha = Sigma^{-1} y.
template <typename Scalar>
Gradient<Scalar> mll_gradient(const ObservationWindow<Scalar>& window, const HyperParams<Scalar>& params) {
  if (window.empty()) throw EmptyWindow();
  const InputMatrix<Scalar> x = window.inputs();
  const Eigen::Index t = x.rows();
  const auto llt = detail::factorize<Scalar>(noisy_covariance(x, params));
  const Vector<Scalar> alpha = llt.solve(window.targets());
  const Matrix<Scalar> sigma_inv = llt.solve(Matrix<Scalar>::Identity(t, t));

  // dSigma/dpsi1 = X X^T + psi2 11^T, dSigma/dpsi2 = psi1 11^T, dSigma/dsigma = 2 sigma I.
  Matrix<Scalar> d_psi1 = x * x.transpose();
  d_psi1.array() += params.psi2;
  const Scalar alpha_sum = alpha.sum();

  Gradient<Scalar> g;
  g(0) = Scalar(0.5) * alpha.dot(d_psi1 * alpha) - Scalar(0.5) * (sigma_inv.cwiseProduct(d_psi1)).sum();
  g(1) = Scalar(0.5) * params.psi1 * alpha_sum * alpha_sum - Scalar(0.5) * params.psi1 * sigma_inv.sum();
  g(2) = params.sigma_obs * alpha.squaredNorm() - params.sigma_obs * sigma_inv.trace();
  return g;
}

template <typename Scalar>
HyperParams<Scalar> project(HyperParams<Scalar> params, const UpdateSettings<Scalar>& settings) {
  params.psi1 = std::max(params.psi1, settings.psi1_floor);
  params.psi2 = std::max(params.psi2, Scalar(0));
  params.sigma_obs = std::max(params.sigma_obs, settings.sigma_floor);
  return params;
}

/// Projected gradient ascent on the log marginal likelihood. Each step halves
/// the step size on a decrease; when no halving helps the current parameters
/// are returned, so the likelihood never drops.
template <typename Scalar>
HyperParams<Scalar> update_hyperparams(const ObservationWindow<Scalar>& window, const HyperParams<Scalar>& params,
                                       const UpdateSettings<Scalar>& settings = {}) {
  semcom::detail::require(window.size() >= 2, "hyperparameter update needs at least 2 observations");
  HyperParams<Scalar> current = project(params, settings);
  Scalar current_ll = log_marginal_likelihood(window, current);

  for (int step = 0; step < settings.n_steps; ++step) {
    const Gradient<Scalar> g = mll_gradient(window, current);
    if (!g.allFinite() || g.norm() < Scalar(1e-10)) break;

    Scalar eta = current.eta;
    bool accepted = false;
    for (int halving = 0; halving <= settings.max_backtracks; ++halving, eta /= 2) {
      HyperParams<Scalar> trial = current;
      if (settings.log_space) {
        const auto factor = [&](Scalar value, Scalar grad) {
          return std::exp(std::clamp(eta * value * grad, -settings.max_log_step, settings.max_log_step));
        };
        trial.psi1 *= factor(current.psi1, g(0));
        trial.psi2 *= factor(current.psi2, g(1));
        trial.sigma_obs *= factor(current.sigma_obs, g(2));
      } else {
        trial.psi1 += eta * g(0);
        trial.psi2 += eta * g(1);
        trial.sigma_obs += eta * g(2);
      }
      trial = project(trial, settings);
      Scalar trial_ll;
      try {
        trial_ll = log_marginal_likelihood(window, trial);
      } catch (const SingularCovariance&) {
        continue;
      }
      if (std::isfinite(trial_ll) && trial_ll >= current_ll) {
        current = trial;
        current_ll = trial_ll;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return current;
}

}  // namespace semcom::gp
