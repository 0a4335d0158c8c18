#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "semcom/acquisition.hpp"
#include "semcom/errors.hpp"

using namespace semcom;

namespace {

/// A window whose normalized CR input is always 0, so the posterior mean does
/// not depend on the CR at all.
gp::ObservationWindow<double> cr_blind_window(double level) {
  gp::ObservationWindow<double> w(5);
  for (int i = 0; i < 5; ++i) w.push({0.0, 0.1 * i}, level + 0.1 * (i % 2));
  return w;
}

UserSurrogate surrogate(const gp::PosteriorModel<double>& model, double q_min_eff, double beta = 1.6448536269514722) {
  UserSurrogate u;
  u.model = &model;
  u.snr_db = 15.0;
  u.q_min_eff = q_min_eff;
  u.beta = beta;
  u.source_dim = 786432;
  return u;
}

}  // namespace

TEST_SUITE("acquisition") {

TEST_CASE("confidence_to_beta") {
  CHECK(std::abs(confidence_to_beta(0.5)) < 1e-12);
  CHECK(confidence_to_beta(0.95) == doctest::Approx(1.64485).epsilon(1e-4 / 1.64485));
  CHECK(confidence_to_beta(0.975) == doctest::Approx(1.95996).epsilon(1e-4 / 1.95996));
  double prev = -1e300;
  for (int i = 1; i < 2000; ++i) {
    const double c = i / 2000.0;
    const double beta = confidence_to_beta(c);
    CHECK(std::abs(beta - oracle::normal_quantile(c)) < 1e-8);
    CHECK(beta > prev);
    prev = beta;
  }
  for (double tail : {1e-10, 1e-6, 0.01, 0.99, 1.0 - 1e-6}) {
    CHECK(std::abs(confidence_to_beta(tail) - oracle::normal_quantile(tail)) < 1e-8);
  }
  CHECK_THROWS_AS(confidence_to_beta(0.0), InvalidArgument);
  CHECK_THROWS_AS(confidence_to_beta(1.0), InvalidArgument);
}

TEST_CASE("constraint_satisfied boundary cases") {
  CHECK(constraint_satisfied({30.0, 4.0}, 30.0, 0.0));
  CHECK_FALSE(constraint_satisfied({31.0, 1.0}, 30.0, 1.5));
  CHECK(constraint_satisfied({31.0, 0.25}, 30.0, 1.5));
}

TEST_CASE("deterministic constraint equals the chance constraint") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double mu = 20.0 + 20.0 * u(rng);
    const double sd = 0.01 + 3.0 * u(rng);
    const double q = 20.0 + 20.0 * u(rng);
    const double c = 0.5 + 0.499 * u(rng);
    const bool det = constraint_satisfied({mu, sd * sd}, q, confidence_to_beta(c));
    const double prob = 1.0 - oracle::normal_cdf((q - mu) / sd);
    if (det != (prob >= c)) CHECK(std::abs(prob - c) <= 1e-7);
  }
}

TEST_CASE("constraint is translation invariant") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const gp::Posterior<double> post{u(rng), std::abs(u(rng))};
    const double q = u(rng);
    const double shift = 4.0;  // exact in binary, so shifting cannot round
    CHECK(constraint_satisfied(post, q, 1.2) == constraint_satisfied({post.mean + shift, post.variance}, q + shift, 1.2));
  }
}

TEST_CASE("candidate sampling") {
  std::vector<CrBounds> bounds{{1.0 / 30.0, 0.3}, {0.1, 0.2}};
  Rng a(5), b(5);
  const auto m1 = sample_candidates(bounds, 100000, a);
  const auto m2 = sample_candidates(bounds, 100000, b);
  CHECK(m1 == m2);
  for (Eigen::Index col = 0; col < 2; ++col) {
    const auto& bd = bounds[static_cast<std::size_t>(col)];
    CHECK(m1.col(col).minCoeff() >= bd.lo);
    CHECK(m1.col(col).maxCoeff() <= bd.hi);
    const double se = (bd.hi - bd.lo) / std::sqrt(12.0 * 100000.0);
    CHECK(std::abs(m1.col(col).mean() - 0.5 * (bd.lo + bd.hi)) < 3.0 * se);
  }

  std::vector<CrBounds> flat{{0.2, 0.2}, {0.1, 0.1}};
  Rng c(9);
  const auto m3 = sample_candidates(flat, 50, c);
  for (Eigen::Index row = 1; row < 50; ++row) CHECK(m3.row(row) == m3.row(0));
}

TEST_CASE("flat posterior: the latency penalty drives the CR to its minimum") {
  const auto w = cr_blind_window(35.0);
  const gp::PosteriorModel<double> model(w, gp::HyperParams<double>{});
  const std::vector<UserSurrogate> users{surrogate(model, -1000.0)};
  AcquisitionSettings s;
  Rng rng(3);
  const auto r = select_cr(users, s, rng);
  CHECK(r.feasible);
  CHECK(r.evaluated == s.mc_samples);
  const double resolution = (users[0].bounds.hi - users[0].bounds.lo) / s.mc_samples;
  CHECK(r.cr[0] - users[0].bounds.lo < 10.0 * resolution);
}

TEST_CASE("selection is the exact feasible argmax") {
  std::mt19937_64 gen(21);
  const auto w = oracle::random_window(gen, 12, 33.0, 6.0);
  const gp::PosteriorModel<double> model(w, gp::HyperParams<double>{2.0, 1.0, 0.7, 0.01});
  const std::vector<UserSurrogate> users{surrogate(model, 30.0), surrogate(model, 29.0)};
  AcquisitionSettings s;
  Rng rng(4);
  Eigen::MatrixXd cand = sample_candidates(std::vector<CrBounds>{{}, {}}, 500, rng);

  const auto scores = score_candidates(users, cand, s);
  const auto r = select_from(users, cand, s);
  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < cand.rows(); ++i) {
    if (scores.min_slack(i) >= 0 && (best < 0 || scores.objective(i) > scores.objective(best))) best = i;
  }
  REQUIRE(best >= 0);
  CHECK(r.feasible);
  CHECK(r.cr[0] == cand(best, 0));
  CHECK(r.best_surrogate_objective == scores.objective(best));
}

TEST_CASE("infeasible slots fall back to the largest minimum slack") {
  const auto w = cr_blind_window(30.0);
  const gp::PosteriorModel<double> model(w, gp::HyperParams<double>{});
  const std::vector<UserSurrogate> users{surrogate(model, 500.0), surrogate(model, 400.0)};
  AcquisitionSettings s;
  Rng rng(8);
  const auto cand = sample_candidates(std::vector<CrBounds>{{}, {}}, 300, rng);
  const auto scores = score_candidates(users, cand, s);
  Eigen::Index best;
  scores.min_slack.maxCoeff(&best);
  const auto r = select_from(users, cand, s);
  CHECK_FALSE(r.feasible);
  CHECK(r.cr[0] == cand(best, 0));
  CHECK(r.cr[1] == cand(best, 1));
}

TEST_CASE("surrogate objective matches an independent evaluation") {
  std::mt19937_64 gen(25);
  const auto w = oracle::random_window(gen, 10);
  const gp::HyperParams<double> p{1.5, 0.5, 0.8, 0.01};
  const gp::PosteriorModel<double> model(w, p);
  const auto d = oracle::dense_problem(w, p);
  const std::vector<UserSurrogate> users{surrogate(model, 20.0), surrogate(model, 20.0)};
  AcquisitionSettings s;
  Rng rng(2);
  const auto cand = sample_candidates(std::vector<CrBounds>{{}, {}}, 20, rng);
  const auto scores = score_candidates(users, cand, s);
  const double snr = users[0].normalizer.snr(15.0);
  for (Eigen::Index i = 0; i < cand.rows(); ++i) {
    double mu = 0.0, root = 0.0;
    for (int n = 0; n < 2; ++n) {
      const double eps = cand(i, n);
      mu += static_cast<double>(oracle::posterior(d, users[0].normalizer.cr(eps), snr).mean);
      root += std::sqrt(eps * 786432.0);
    }
    const double expected = mu - s.alpha * s.bits_per_symbol / (2.0 * s.total_rate) * root * root;
    CHECK(scores.objective(i) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("empty candidate sets are rejected") {
  const auto w = cr_blind_window(30.0);
  const gp::PosteriorModel<double> model(w, gp::HyperParams<double>{});
  const std::vector<UserSurrogate> users{surrogate(model, 0.0)};
  AcquisitionSettings s;
  s.mc_samples = 0;
  Rng rng(1);
  CHECK_THROWS_AS(select_cr(users, s, rng), EmptyCandidateSet);
  CHECK_THROWS_AS(select_from(users, Eigen::MatrixXd(0, 1), s), EmptyCandidateSet);
}

}  // TEST_SUITE
