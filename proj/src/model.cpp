#include "betareg/model.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>

namespace betareg {

namespace {

bool is_intercept_column(const Eigen::VectorXd& col) {
  return (col.array() == 1.0).all();
}

bool full_column_rank(const Eigen::MatrixXd& m) {
  if (m.rows() < m.cols()) return false;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  return qr.rank() == m.cols();
}

}  // namespace

ValidationReport validate_spec(const ModelSpec& spec) {
  ValidationReport report;
  auto add = [&report](const std::string& msg) { report.violations.push_back(msg); };

  const Eigen::Index n = spec.n();
  if (n == 0) {
    add("empty response vector");
    return report;
  }
  if (spec.X.rows() != n) add("X row count does not match response length");
  if (spec.Z.rows() != n) add("Z row count does not match response length");
  if (spec.X.cols() == 0) add("X has no columns");
  if (spec.Z.cols() == 0) add("Z has no columns");

  for (Eigen::Index t = 0; t < n; ++t) {
    if (!std::isfinite(spec.y(t))) {
      add("non-finite response at row " + std::to_string(t + 1));
      break;
    }
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    const double y = spec.y(t);
    if (std::isfinite(y) && (y <= 0.0 || y >= 1.0)) {
      add("response on boundary: y = " + std::to_string(y) + " at row " + std::to_string(t + 1));
      break;
    }
  }
  if (!spec.X.allFinite()) add("non-finite entry in X");
  if (!spec.Z.allFinite()) add("non-finite entry in Z");

  if (spec.X.rows() == n && spec.X.cols() > 0 && spec.X.allFinite()) {
    if (!is_intercept_column(spec.X.col(0))) add("first column of X is not an intercept column");
    if (!full_column_rank(spec.X)) add("rank deficiency in X");
  }
  if (spec.Z.rows() == n && spec.Z.cols() > 0 && spec.Z.allFinite()) {
    if (!is_intercept_column(spec.Z.col(0))) add("first column of Z is not an intercept column");
    if (!full_column_rank(spec.Z)) add("rank deficiency in Z");
  }
  if (spec.k() + spec.q() >= n) add("k + q must be smaller than n");

  if (!link_admissible_for_mean(spec.mean_link)) {
    add("mean link must be logit or loglog");
  }
  if (!link_admissible_for_precision(spec.precision_link)) {
    add("precision link must be log");
  }
  return report;
}

void require_valid(const ModelSpec& spec) {
  const ValidationReport report = validate_spec(spec);
  if (report.ok()) return;
  std::ostringstream msg;
  msg << "invalid model specification:";
  for (const auto& v : report.violations) msg << "\n  - " << v;
  throw std::invalid_argument(msg.str());
}

Eigen::VectorXd shrink_boundary(const Eigen::VectorXd& y) {
  const double n = static_cast<double>(y.size());
  return (y.array() * (n - 1.0) + 0.5) / n;
}

}  // namespace betareg
