#include "betareg/link.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace betareg {

namespace {

constexpr double kUnitLo = std::numeric_limits<double>::min();
constexpr double kUnitHi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;

[[noreturn]] void out_of_domain(Link link, double value) {
  throw std::domain_error("link " + link_name(link) + ": value " + std::to_string(value) +
                          " outside the open domain");
}

}  // namespace

double link_apply(Link link, double value) {
  switch (link) {
    case Link::logit:
      if (!(value > 0.0 && value < 1.0)) out_of_domain(link, value);
      return std::log(value / (1.0 - value));
    case Link::loglog:
      if (!(value > 0.0 && value < 1.0)) out_of_domain(link, value);
      return -std::log(-std::log(value));
    case Link::log:
      if (!(value > 0.0) || !std::isfinite(value)) out_of_domain(link, value);
      return std::log(value);
  }
  throw std::logic_error("unreachable link kind");
}

double link_inverse(Link link, double eta) {
  double value = 0.0;
  switch (link) {
    case Link::logit:
      value = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                         : std::exp(eta) / (1.0 + std::exp(eta));
      return std::min(std::max(value, kUnitLo), kUnitHi);
    case Link::loglog:
      value = std::exp(-std::exp(-eta));
      return std::min(std::max(value, kUnitLo), kUnitHi);
    case Link::log:
      value = std::exp(eta);
      return std::min(std::max(value, kUnitLo), std::numeric_limits<double>::max());
  }
  throw std::logic_error("unreachable link kind");
}

double link_derivative(Link link, double value) {
  switch (link) {
    case Link::logit:
      if (!(value > 0.0 && value < 1.0)) out_of_domain(link, value);
      return 1.0 / (value * (1.0 - value));
    case Link::loglog:
      if (!(value > 0.0 && value < 1.0)) out_of_domain(link, value);
      // d/dmu [-log(-log mu)] = -1 / (mu log mu), positive on (0,1)
      return -1.0 / (value * std::log(value));
    case Link::log:
      if (!(value > 0.0) || !std::isfinite(value)) out_of_domain(link, value);
      return 1.0 / value;
  }
  throw std::logic_error("unreachable link kind");
}

bool link_admissible_for_mean(Link link) {
  return link == Link::logit || link == Link::loglog;
}

bool link_admissible_for_precision(Link link) { return link == Link::log; }

std::string link_name(Link link) {
  switch (link) {
    case Link::logit: return "logit";
    case Link::loglog: return "loglog";
    case Link::log: return "log";
  }
  return "?";
}

Link link_from_name(const std::string& name) {
  if (name == "logit") return Link::logit;
  if (name == "loglog") return Link::loglog;
  if (name == "log") return Link::log;
  throw std::invalid_argument("unknown link '" + name + "' (expected logit, loglog or log)");
}

}  // namespace betareg
