#pragma once

// Closed-form TDMA rate split minimizing sum_n eps_n L_n / R_n subject to
// sum_n R_n = R: the KKT conditions give R_n proportional to sqrt(eps_n L_n).

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "semcom/core.hpp"
#include "semcom/errors.hpp"

namespace semcom {

template <typename Scalar>
struct RateAllocation {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rates;      // bits/s
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> latencies;  // s
  Scalar avg_latency{0};
};

namespace detail {

inline constexpr double kMinCr = 1e-9;

template <typename Derived, typename LDerived>
void check_allocation_args(const Eigen::MatrixBase<Derived>& eps, const Eigen::MatrixBase<LDerived>& source_dims,
                           typename Derived::Scalar total_rate) {
  require(eps.size() > 0, "allocation needs at least one user");
  require(eps.size() == source_dims.size(), "eps and source_dims differ in length");
  require(total_rate > 0, "total rate must be positive");
  for (Eigen::Index i = 0; i < eps.size(); ++i) {
    require(eps(i) > 0, "compression ratios must be positive");
    require(source_dims(i) >= 1, "source dimensions must be at least 1");
  }
}

/// sqrt(eps_n L_n) with the degenerate-CR guard applied.
template <typename Derived, typename LDerived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> sqrt_loads(const Eigen::MatrixBase<Derived>& eps,
                                                                       const Eigen::MatrixBase<LDerived>& source_dims) {
  using Scalar = typename Derived::Scalar;
  return (eps.array().max(Scalar(kMinCr)) * source_dims.template cast<Scalar>().array()).sqrt().matrix();
}

}  // namespace detail

/// R_n = R sqrt(eps_n L_n) / sum_m sqrt(eps_m L_m); T_n = B ceil(eps_n L_n) / R_n.
template <typename Derived, typename LDerived>
RateAllocation<typename Derived::Scalar> allocate_rates(const Eigen::MatrixBase<Derived>& eps,
                                                        const Eigen::MatrixBase<LDerived>& source_dims,
                                                        typename Derived::Scalar total_rate, int bits_per_symbol) {
  using Scalar = typename Derived::Scalar;
  detail::check_allocation_args(eps, source_dims, total_rate);
  detail::require(bits_per_symbol >= 1, "bits per symbol must be positive");

  const auto roots = detail::sqrt_loads(eps, source_dims);
  RateAllocation<Scalar> out;
  out.rates = total_rate * roots / roots.sum();
  out.latencies.resize(eps.size());
  for (Eigen::Index i = 0; i < eps.size(); ++i) {
    const auto symbols = feature_length(static_cast<double>(eps(i)), static_cast<std::int64_t>(source_dims(i)));
    out.latencies(i) = Scalar(bits_per_symbol) * Scalar(symbols) / out.rates(i);
  }
  out.avg_latency = out.latencies.mean();
  return out;
}

/// alpha * B / (N R) * (sum_n sqrt(eps_n L_n))^2: the average-latency penalty
/// after substituting the optimal rates (continuous feature lengths).
template <typename Derived, typename LDerived>
typename Derived::Scalar latency_term(const Eigen::MatrixBase<Derived>& eps, const Eigen::MatrixBase<LDerived>& source_dims,
                                      typename Derived::Scalar total_rate, int bits_per_symbol,
                                      typename Derived::Scalar alpha) {
  using Scalar = typename Derived::Scalar;
  detail::check_allocation_args(eps, source_dims, total_rate);
  const Scalar root_sum = detail::sqrt_loads(eps, source_dims).sum();
  const auto n = static_cast<Scalar>(eps.size());
  return alpha * Scalar(bits_per_symbol) / (n * total_rate) * root_sum * root_sum;
}

}  // namespace semcom
