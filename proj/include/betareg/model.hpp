#ifndef BETAREG_MODEL_HPP
#define BETAREG_MODEL_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "betareg/link.hpp"

namespace betareg {

// Estimation-level failure: rank-deficient design, singular information
// block, non-convergent auxiliary fit.
struct EstimationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical degeneracy tied to a specific observation (e.g. non-positive
// combined-residual variance, unit leverage).
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A beta-regression problem: response in (0,1), mean design X (n x k) and
// precision design Z (n x q), both carrying an explicit leading column of
// ones, plus the two link choices. Immutable after construction by
// convention; all fitting functions take it by const reference.
struct ModelSpec {
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Z;
  Link mean_link = Link::logit;
  Link precision_link = Link::log;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index k() const { return X.cols(); }
  Eigen::Index q() const { return Z.cols(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every ModelSpec invariant and reports all violations: responses
// on or outside (0,1), non-finite entries, missing intercept columns,
// rank-deficient designs, k+q >= n, inadmissible links.
ValidationReport validate_spec(const ModelSpec& spec);

// Throws std::invalid_argument listing the violations if validation fails.
void require_valid(const ModelSpec& spec);

// The conventional boundary shrinkage (y*(n-1) + 0.5)/n, applied opt-in by
// callers whose data contain exact zeros or ones.
Eigen::VectorXd shrink_boundary(const Eigen::VectorXd& y);

// Converged maximum-likelihood fit of a ModelSpec.
struct FittedModel {
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  Eigen::VectorXd mu;
  Eigen::VectorXd phi;
  Eigen::VectorXd eta;       // X * beta
  Eigen::VectorXd vartheta;  // Z * gamma
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglik_trace;  // accepted log-likelihood per iteration
};

}  // namespace betareg

#endif  // BETAREG_MODEL_HPP
