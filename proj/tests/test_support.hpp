#ifndef BETAREG_TEST_SUPPORT_HPP
#define BETAREG_TEST_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <utility>

#include "betareg/fisher_scoring.hpp"
#include "betareg/model.hpp"
#include "betareg/random.hpp"
#include "betareg/simulation.hpp"

namespace betareg::test {

inline double rel_err(double actual, double expected) {
  const double scale = std::max({1.0, std::abs(actual), std::abs(expected)});
  return std::abs(actual - expected) / scale;
}

// Independent digamma oracle: recurrence to x >= 200, then the asymptotic
// series truncated where the terms are far below double precision. The
// shift is deep enough that the truncation error is ~B16/(16*200^16),
// i.e. negligible, making this a distinct computation path from the
// library's threshold-6 implementation.
inline double digamma_oracle(double x) {
  double acc = 0.0;
  while (x < 200.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = std::log(x) - 0.5 * inv;
  series -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0)));
  return acc + series;
}

inline double trigamma_oracle(double x) {
  double acc = 0.0;
  while (x < 200.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 1.0 + 0.5 * inv;
  series += inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0)));
  return acc + series * inv;
}

// Harness-generated spec: data simulated from a calibrated true model,
// exactly as the Monte Carlo engine produces per replication.
struct HarnessData {
  ModelSpec spec;               // estimated-model design
  Eigen::VectorXd beta_true;    // coefficients of the true model
  Eigen::VectorXd gamma_true;
  Eigen::VectorXd mu_true;
  Eigen::VectorXd phi_true;
};

inline HarnessData make_harness_data(std::uint64_t seed, int n, int mean_slopes,
                                     int precision_slopes, MuRange range,
                                     Dispersion dispersion) {
  ScenarioConfig config;
  config.n = n;
  config.seed = seed;
  config.mu_range = range;
  config.dispersion = dispersion;
  config.true_mean_covariates = mean_slopes;
  config.true_precision_covariates = precision_slopes;
  config.estimated_mean_covariates = mean_slopes;
  config.estimated_precision_covariates = precision_slopes;

  const RandomStream root(seed);
  HarnessData data;
  const auto [X, Z] = generate_covariates(config, root);
  std::tie(data.beta_true, data.gamma_true) = calibrate_coefficients(config, X, Z);
  std::tie(data.mu_true, data.phi_true) =
      true_parameters(config, X, Z, data.beta_true, data.gamma_true);

  RandomStream stream = root.substream(1);
  data.spec.y.resize(n);
  for (int t = 0; t < n; ++t) {
    data.spec.y(t) = sample_beta(data.mu_true(t), data.phi_true(t), stream);
  }
  data.spec.X = X;
  data.spec.Z = Z;
  data.spec.mean_link = Link::logit;
  data.spec.precision_link = Link::log;
  return data;
}

}  // namespace betareg::test

#endif  // BETAREG_TEST_SUPPORT_HPP
