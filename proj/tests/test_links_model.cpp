#include <doctest.h>

#include <cmath>

#include "betareg/link.hpp"
#include "betareg/model.hpp"
#include "betareg/random.hpp"
#include "test_support.hpp"

using namespace betareg;
using betareg::test::rel_err;

TEST_CASE("link_apply fixed points") {
  CHECK(link_apply(Link::logit, 0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(link_apply(Link::loglog, std::exp(-1.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(link_apply(Link::log, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("link_apply rejects boundary values") {
  CHECK_THROWS_AS(link_apply(Link::logit, 0.0), std::domain_error);
  CHECK_THROWS_AS(link_apply(Link::logit, 1.0), std::domain_error);
  CHECK_THROWS_AS(link_apply(Link::loglog, 1.0), std::domain_error);
  CHECK_THROWS_AS(link_apply(Link::log, 0.0), std::domain_error);
  CHECK_THROWS_AS(link_apply(Link::log, -2.0), std::domain_error);
}

TEST_CASE("link_inverse fixed points") {
  CHECK(link_inverse(Link::logit, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(link_inverse(Link::loglog, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(link_inverse(Link::log, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("link_inverse(logit) hits 0.9 at the bisection-solved eta") {
  // independent root-find of logit(mu) = log 9
  const double target = std::log(0.9 / 0.1);
  double lo = 0.5, hi = 1.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::log(mid / (1.0 - mid)) < target ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(link_inverse(Link::logit, 2.1972245773362196) == doctest::Approx(0.9).epsilon(1e-10));
}

TEST_CASE("round trip: inverse after apply is the identity on interior points") {
  RandomStream rng(8801);
  for (Link link : {Link::logit, Link::loglog}) {
    for (int i = 0; i < 1000; ++i) {
      const double mu = rng.uniform(0.001, 0.999);
      CHECK(rel_err(link_inverse(link, link_apply(link, mu)), mu) < 1e-10);
    }
  }
  for (int i = 0; i < 1000; ++i) {
    const double phi = std::exp(rng.uniform(std::log(1e-3), std::log(1e6)));
    CHECK(rel_err(link_inverse(Link::log, link_apply(Link::log, phi)), phi) < 1e-10);
  }
}

TEST_CASE("round trip: apply after inverse on representable eta windows") {
  // loglog saturates below eta ~ -6.5 where exp(-exp(-eta)) underflows, so
  // the eta-side round trip is only meaningful on the representable window.
  RandomStream rng(8803);
  for (int i = 0; i < 1000; ++i) {
    const double eta = rng.uniform(-30.0, 30.0);
    CHECK(rel_err(link_apply(Link::logit, link_inverse(Link::logit, eta)), eta) < 1e-10);
  }
  for (int i = 0; i < 1000; ++i) {
    const double eta = rng.uniform(-5.5, 25.0);
    CHECK(rel_err(link_apply(Link::loglog, link_inverse(Link::loglog, eta)), eta) < 1e-10);
  }
  for (int i = 0; i < 1000; ++i) {
    const double eta = rng.uniform(-300.0, 300.0);
    CHECK(rel_err(link_apply(Link::log, link_inverse(Link::log, eta)), eta) < 1e-10);
  }
}

TEST_CASE("link_inverse clamps to the open domain for extreme eta") {
  for (Link link : {Link::logit, Link::loglog}) {
    const double lo = link_inverse(link, -1e4);
    const double hi = link_inverse(link, 1e4);
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
  }
  CHECK(link_inverse(Link::log, -1e6) > 0.0);
  CHECK(std::isfinite(link_inverse(Link::log, 1e6)));
}

TEST_CASE("link_apply is strictly increasing") {
  for (Link link : {Link::logit, Link::loglog}) {
    double prev = link_apply(link, 0.001);
    for (int i = 1; i <= 200; ++i) {
      const double v = 0.001 + (0.998 * i) / 200.0;
      const double cur = link_apply(link, v);
      CHECK(cur > prev);
      prev = cur;
    }
  }
  double prev = link_apply(Link::log, 0.01);
  for (int i = 1; i <= 200; ++i) {
    const double cur = link_apply(Link::log, 0.01 + i);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("link_derivative closed forms and positivity") {
  CHECK(link_derivative(Link::logit, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(link_derivative(Link::log, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(link_derivative(Link::logit, 0.0), std::domain_error);
  CHECK_THROWS_AS(link_derivative(Link::loglog, 1.0), std::domain_error);
}

TEST_CASE("link_derivative matches finite differences") {
  RandomStream rng(8802);
  for (Link link : {Link::logit, Link::loglog}) {
    for (int i = 0; i < 300; ++i) {
      const double v = rng.uniform(0.02, 0.98);
      const double h = 1e-7;
      const double fd = (link_apply(link, v + h) - link_apply(link, v - h)) / (2.0 * h);
      CHECK(rel_err(link_derivative(link, v), fd) < 1e-6);
      CHECK(link_derivative(link, v) > 0.0);
    }
  }
  // loglog derivative at 0.5 against the FD oracle
  const double h = 1e-7;
  const double fd =
      (link_apply(Link::loglog, 0.5 + h) - link_apply(Link::loglog, 0.5 - h)) / (2.0 * h);
  CHECK(rel_err(link_derivative(Link::loglog, 0.5), fd) < 1e-6);
}

namespace {

ModelSpec tiny_valid_spec() {
  ModelSpec spec;
  spec.y.resize(6);
  spec.y << 0.2, 0.4, 0.5, 0.6, 0.7, 0.3;
  spec.X.resize(6, 2);
  spec.X << 1, 0.1, 1, 0.3, 1, 0.5, 1, 0.6, 1, 0.9, 1, 0.2;
  spec.Z = Eigen::MatrixXd::Ones(6, 1);
  return spec;
}

}  // namespace

TEST_CASE("validate_spec passes a clean spec") {
  CHECK(validate_spec(tiny_valid_spec()).ok());
}

TEST_CASE("validate_spec flags boundary responses") {
  ModelSpec spec = tiny_valid_spec();
  spec.y(2) = 1.0;
  const auto report = validate_spec(spec);
  CHECK_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.find("boundary") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validate_spec flags rank deficiency") {
  ModelSpec spec = tiny_valid_spec();
  spec.X.conservativeResize(Eigen::NoChange, 3);
  spec.X.col(2) = spec.X.col(1);  // duplicate column
  const auto report = validate_spec(spec);
  CHECK_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.find("rank deficiency") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validate_spec flags k+q >= n and missing intercept") {
  ModelSpec spec = tiny_valid_spec();
  spec.y.conservativeResize(3);
  spec.X.conservativeResize(3, Eigen::NoChange);
  spec.Z.conservativeResize(3, Eigen::NoChange);
  CHECK_FALSE(validate_spec(spec).ok());  // k+q = 3 = n

  ModelSpec spec2 = tiny_valid_spec();
  spec2.X.col(0) = spec2.X.col(1);
  CHECK_FALSE(validate_spec(spec2).ok());
}

TEST_CASE("validate_spec accepts harness-generated data") {
  const auto data = betareg::test::make_harness_data(31, 50, 2, 1, MuRange::mid,
                                                     Dispersion::varying_lambda(20.0));
  CHECK(validate_spec(data.spec).ok());
}

TEST_CASE("shrink_boundary maps into the open interval") {
  Eigen::VectorXd y(4);
  y << 0.0, 1.0, 0.5, 0.25;
  const Eigen::VectorXd s = shrink_boundary(y);
  CHECK(s(0) == doctest::Approx(0.5 / 4.0));
  CHECK(s(1) == doctest::Approx((3.0 + 0.5) / 4.0));
  for (int i = 0; i < 4; ++i) {
    CHECK(s(i) > 0.0);
    CHECK(s(i) < 1.0);
  }
}

TEST_CASE("link name round trip") {
  for (Link link : {Link::logit, Link::loglog, Link::log}) {
    CHECK(link_from_name(link_name(link)) == link);
  }
  CHECK_THROWS_AS(link_from_name("probit"), std::invalid_argument);
}
