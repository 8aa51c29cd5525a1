#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "betareg/random.hpp"
#include "betareg/special_functions.hpp"
#include "test_support.hpp"

using namespace betareg;
using betareg::test::rel_err;

namespace {
constexpr double kEulerGamma = 0.57721566490153286061;
}

TEST_CASE("log_gamma analytic values") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-14);
  CHECK(std::abs(log_gamma(2.0)) < 1e-14);
  CHECK(rel_err(log_gamma(0.5), 0.5 * std::log(std::numbers::pi)) < 1e-13);
  CHECK(rel_err(log_gamma(5.0), std::log(24.0)) < 1e-13);
}

TEST_CASE("log_gamma matches std::lgamma across the working range") {
  RandomStream rng(7101);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(rng.uniform(std::log(1e-6), std::log(1e6)));
    const double expected = std::lgamma(x);
    CHECK(rel_err(log_gamma(x), expected) < 1e-12);
  }
}

TEST_CASE("log_gamma rejects non-positive and non-finite arguments") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("digamma analytic values") {
  CHECK(rel_err(digamma(1.0), -kEulerGamma) < 1e-12);
  CHECK(rel_err(digamma(0.5), -kEulerGamma - 2.0 * std::log(2.0)) < 1e-12);
}

TEST_CASE("digamma recurrence at 3.7 against the series oracle") {
  const double direct = digamma(3.7);
  const double via_recurrence = digamma(2.7) + 1.0 / 2.7;
  CHECK(rel_err(direct, via_recurrence) < 1e-12);
  CHECK(rel_err(direct, betareg::test::digamma_oracle(3.7)) < 1e-12);
}

TEST_CASE("digamma matches the oracle over [1e-6, 1e6]") {
  RandomStream rng(7102);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(rng.uniform(std::log(1e-6), std::log(1e6)));
    CHECK(rel_err(digamma(x), betareg::test::digamma_oracle(x)) < 1e-10);
  }
}

TEST_CASE("trigamma analytic values and positivity") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(rel_err(trigamma(1.0), pi2 / 6.0) < 1e-12);
  CHECK(rel_err(trigamma(0.5), pi2 / 2.0) < 1e-12);

  RandomStream rng(7103);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(rng.uniform(std::log(1e-6), std::log(1e6)));
    const double value = trigamma(x);
    CHECK(value > 0.0);
    CHECK(rel_err(value, betareg::test::trigamma_oracle(x)) < 1e-10);
  }
}

TEST_CASE("trigamma recurrence at 3.7") {
  CHECK(rel_err(trigamma(3.7), trigamma(2.7) - 1.0 / (2.7 * 2.7)) < 1e-12);
}

TEST_CASE("psi recurrences hold on a log-uniform grid") {
  RandomStream rng(7104);
  for (int i = 0; i < 500; ++i) {
    const double x = std::exp(rng.uniform(std::log(1e-3), std::log(1e4)));
    CHECK(rel_err(digamma(x + 1.0) - digamma(x), 1.0 / x) < 1e-9);
    CHECK(rel_err(trigamma(x + 1.0) - trigamma(x), -1.0 / (x * x)) < 1e-9);
  }
}

TEST_CASE("digamma is the derivative of log_gamma") {
  RandomStream rng(7105);
  for (int i = 0; i < 200; ++i) {
    const double x = std::exp(rng.uniform(std::log(0.1), std::log(100.0)));
    const double h = 1e-5 * std::max(1.0, x);
    const double fd = (log_gamma(x + h) - log_gamma(x - h)) / (2.0 * h);
    CHECK(rel_err(digamma(x), fd) < 1e-6);
  }
}

TEST_CASE("sample_beta stays strictly inside (0,1)") {
  RandomStream rng(7106);
  for (int i = 0; i < 20000; ++i) {
    const double y = sample_beta(0.3, 50.0, rng);
    CHECK(y > 0.0);
    CHECK(y < 1.0);
  }
  // shapes below one, where naive gamma ratios underflow
  RandomStream rng2(7107);
  for (int i = 0; i < 20000; ++i) {
    const double y = sample_beta(0.005, 5.0, rng2);
    CHECK(y > 0.0);
    CHECK(y < 1.0);
  }
}

TEST_CASE("sample_beta moments match the mean/precision parametrization") {
  const double mu = 0.3;
  const double phi = 50.0;
  const int n = 1000000;
  RandomStream rng(7108);

  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = sample_beta(mu, phi, rng);
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double true_var = mu * (1.0 - mu) / (1.0 + phi);

  const double se_mean = std::sqrt(true_var / n);
  CHECK(std::abs(mean - mu) < 3.0 * se_mean);

  // SE of the sample variance via the empirical fourth central moment
  double m4 = 0.0;
  RandomStream rng2(7108);
  for (int i = 0; i < n; ++i) {
    const double y = sample_beta(mu, phi, rng2);
    const double d = y - mean;
    m4 += d * d * d * d;
  }
  m4 /= n;
  const double se_var = std::sqrt((m4 - true_var * true_var) / n);
  CHECK(std::abs(var - true_var) < 3.0 * se_var);
}

TEST_CASE("sample_beta is bit-reproducible for a fixed seed") {
  RandomStream a(424242);
  RandomStream b(424242);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sample_beta(0.7, 12.0, a) == sample_beta(0.7, 12.0, b));
  }
}

TEST_CASE("sample_beta rejects out-of-domain parameters") {
  RandomStream rng(1);
  CHECK_THROWS_AS(sample_beta(0.0, 10.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_beta(1.0, 10.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_beta(0.5, 0.0, rng), std::domain_error);
  CHECK_THROWS_AS(sample_beta(0.5, -3.0, rng), std::domain_error);
}

TEST_CASE("substreams are independent of parent consumption") {
  RandomStream a(99);
  RandomStream b(99);
  (void)a.uniform01();  // consume from one parent only
  (void)a.uniform01();
  RandomStream sub_a = a.substream(17);
  RandomStream sub_b = b.substream(17);
  for (int i = 0; i < 100; ++i) CHECK(sub_a.next_u64() == sub_b.next_u64());
}

TEST_CASE("distinct substreams differ") {
  RandomStream root(5);
  RandomStream s1 = root.substream(1);
  RandomStream s2 = root.substream(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i) {
    if (s1.next_u64() == s2.next_u64()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("student_t(3) is symmetric and heavy-tailed") {
  RandomStream rng(7109);
  const int n = 200000;
  double sum = 0.0;
  int extreme = 0;
  for (int i = 0; i < n; ++i) {
    const double t = rng.student_t(3);
    sum += t;
    if (std::abs(t) > 6.0) ++extreme;
  }
  // mean 0 with variance 3: SE = sqrt(3/n)
  CHECK(std::abs(sum / n) < 3.0 * std::sqrt(3.0 / n));
  // P(|t3| > 6) = 0.009273; a normal tail would be ~2e-9
  const double p = 0.009273;
  const double sd = std::sqrt(n * p * (1.0 - p));
  CHECK(extreme > n * p - 3.0 * sd);
  CHECK(extreme < n * p + 3.0 * sd);
}
