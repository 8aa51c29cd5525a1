#ifndef BETAREG_CSV_HPP
#define BETAREG_CSV_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace betareg {

// A numeric CSV dataset: header row, comma separators, '.' decimal point.
struct Dataset {
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // n rows x columns.size()

  Eigen::Index rows() const { return values.rows(); }
  bool has_column(const std::string& name) const;
  // Throws std::invalid_argument naming the column if absent.
  Eigen::VectorXd column(const std::string& name) const;
};

Dataset read_csv(const std::string& path);
Dataset parse_csv(const std::string& text, const std::string& origin = "<string>");

}  // namespace betareg

#endif  // BETAREG_CSV_HPP
