#ifndef BETAREG_RANDOM_HPP
#define BETAREG_RANDOM_HPP

#include <cstdint>
#include <random>

namespace betareg {

// Deterministic random stream with index-addressable substreams.
//
// Every stream remembers the seed it was derived from, so substream(i)
// is a pure function of (root seed, i): two streams created from the same
// seed hand out identical substreams regardless of how much either has
// been consumed. Monte Carlo replication r draws from substream(r) and is
// therefore reproducible under any execution order.
//
// All samplers below are implemented on top of the raw engine output, so
// draws are bit-identical across platforms and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Independent child stream addressed by index.
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1).
  double uniform01();

  // Uniform on (lo, hi).
  double uniform(double lo, double hi);

  // Standard normal (Marsaglia polar method).
  double normal();

  // Gamma(shape, 1), shape > 0 (Marsaglia-Tsang squeeze sampler, with the
  // power-of-uniform boost for shape < 1).
  double gamma(double shape);

  // log of a Gamma(shape, 1) draw; safe for very small shapes where the
  // draw itself would underflow to zero.
  double gamma_log(double shape);

  // Student's t with `dof` degrees of freedom.
  double student_t(int dof);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// One draw from Beta(mu*phi, (1-mu)*phi), i.e. the mean/precision
// parametrization with E(y) = mu and Var(y) = mu(1-mu)/(1+phi).
// Generated as the ratio of two independent gamma variates, computed in
// log space so the result is strictly inside (0,1) even for shapes
// far below one. Throws std::domain_error for parameters out of range.
double sample_beta(double mu, double phi, RandomStream& rng);

}  // namespace betareg

#endif  // BETAREG_RANDOM_HPP
