#include "betareg/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace betareg {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(make_engine(seed)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  std::uint64_t s = seed_ ^ (0x9E3779B97F4A7C15ull * (index + 1));
  const std::uint64_t child = splitmix64(s);
  return RandomStream(child);
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  // 53-bit mantissa, offset by half an ulp so the result is never 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RandomStream::normal() {
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::domain_error("gamma: shape must be positive, got " + std::to_string(shape));
  }
  if (shape < 1.0) {
    // boost: G(a) = G(a+1) * U^{1/a}
    return gamma(shape + 1.0) * std::pow(uniform01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::gamma_log(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::domain_error("gamma_log: shape must be positive, got " + std::to_string(shape));
  }
  if (shape < 1.0) {
    // log(G(a)) = log(G(a+1)) + log(U)/a, exact even where U^{1/a} underflows
    return gamma_log(shape + 1.0) + std::log(uniform01()) / shape;
  }
  return std::log(gamma(shape));
}

double RandomStream::student_t(int dof) {
  if (dof < 1) throw std::domain_error("student_t: dof must be >= 1");
  const double z = normal();
  const double chi2 = 2.0 * gamma(0.5 * dof);
  return z / std::sqrt(chi2 / dof);
}

double sample_beta(double mu, double phi, RandomStream& rng) {
  if (!(mu > 0.0) || !(mu < 1.0) || !std::isfinite(mu)) {
    throw std::domain_error("sample_beta: mu must lie in (0,1), got " + std::to_string(mu));
  }
  if (!(phi > 0.0) || !std::isfinite(phi)) {
    throw std::domain_error("sample_beta: phi must be positive, got " + std::to_string(phi));
  }
  const double lg1 = rng.gamma_log(mu * phi);
  const double lg2 = rng.gamma_log((1.0 - mu) * phi);
  const double delta = lg1 - lg2;
  // y = g1/(g1+g2) = sigmoid(delta), evaluated on the stable branch
  double y;
  if (delta >= 0.0) {
    y = 1.0 / (1.0 + std::exp(-delta));
  } else {
    const double e = std::exp(delta);
    y = e / (1.0 + e);
  }
  // keep the support open under floating-point rounding
  const double lo = std::numeric_limits<double>::min();
  const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (y < lo) y = lo;
  if (y > hi) y = hi;
  return y;
}

}  // namespace betareg
