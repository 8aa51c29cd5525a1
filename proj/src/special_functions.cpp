#include "betareg/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace betareg {

namespace {

[[noreturn]] void domain_fail(const char* fn, double x) {
  throw std::domain_error(std::string(fn) + ": argument must be positive and finite, got " +
                          std::to_string(x));
}

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // log(2*pi)/2

double log_gamma_lanczos(double x) {
  // valid for x >= 0.5
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) domain_fail("log_gamma", x);
  if (x < 0.5) {
    // lgamma(x) = lgamma(x+1) - log(x); avoids the pole at 0.
    return log_gamma_lanczos(x + 1.0) - std::log(x);
  }
  return log_gamma_lanczos(x);
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) domain_fail("digamma", x);
  // Upward recurrence psi(x) = psi(x+1) - 1/x until x >= 6, then the
  // asymptotic expansion in 1/x^2.
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = std::log(x) - 0.5 * inv;
  series -= inv2 * (1.0 / 12.0 +
                    inv2 * (-1.0 / 120.0 +
                            inv2 * (1.0 / 252.0 +
                                    inv2 * (-1.0 / 240.0 +
                                            inv2 * (1.0 / 132.0 +
                                                    inv2 * (-691.0 / 32760.0 +
                                                            inv2 * (1.0 / 12.0)))))));
  return acc + series;
}

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) domain_fail("trigamma", x);
  // psi'(x) = psi'(x+1) + 1/x^2 until x >= 6, then the asymptotic series.
  double acc = 0.0;
  while (x < 6.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 1.0 + 0.5 * inv;
  series += inv2 * (1.0 / 6.0 +
                    inv2 * (-1.0 / 30.0 +
                            inv2 * (1.0 / 42.0 +
                                    inv2 * (-1.0 / 30.0 +
                                            inv2 * (5.0 / 66.0 +
                                                    inv2 * (-691.0 / 2730.0 +
                                                            inv2 * (7.0 / 6.0)))))));
  return acc + series * inv;
}

}  // namespace betareg
