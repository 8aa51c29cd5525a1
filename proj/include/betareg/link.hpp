#ifndef BETAREG_LINK_HPP
#define BETAREG_LINK_HPP

#include <string>

namespace betareg {

// Link functions for the two submodels. logit and loglog map (0,1) onto
// the real line and are admissible for the mean submodel only; log maps
// (0,inf) onto the real line and is admissible for the precision submodel
// only. All three are strictly increasing and twice differentiable.
//
// loglog is defined as eta = -log(-log(mu)) with inverse
// mu = exp(-exp(-eta)).
enum class Link { logit, loglog, log };

// g(value). Throws std::domain_error at or outside the domain boundary.
double link_apply(Link link, double value);

// g^{-1}(eta). Total on finite reals; the result is clamped to the open
// domain so downstream code never sees an exact boundary value.
double link_inverse(Link link, double eta);

// g'(value), strictly positive on the interior of the domain.
double link_derivative(Link link, double value);

bool link_admissible_for_mean(Link link);
bool link_admissible_for_precision(Link link);

std::string link_name(Link link);

// Parses "logit" | "loglog" | "log"; throws std::invalid_argument otherwise.
Link link_from_name(const std::string& name);

}  // namespace betareg

#endif  // BETAREG_LINK_HPP
