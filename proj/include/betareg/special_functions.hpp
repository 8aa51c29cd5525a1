#ifndef BETAREG_SPECIAL_FUNCTIONS_HPP
#define BETAREG_SPECIAL_FUNCTIONS_HPP

namespace betareg {

// Natural log of the gamma function for x > 0.
// Throws std::domain_error for non-positive or non-finite arguments.
double log_gamma(double x);

// Digamma function psi(x) = d log Gamma(x) / dx, x > 0.
double digamma(double x);

// Trigamma function psi'(x), x > 0. Strictly positive on its domain.
double trigamma(double x);

}  // namespace betareg

#endif  // BETAREG_SPECIAL_FUNCTIONS_HPP
