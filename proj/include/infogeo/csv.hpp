#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace infogeo {

enum class TableFormat { csv, dat };

/// 12 significant digits, locale independent.
[[nodiscard]] std::string format_number(double v);

/// Writes header then rows; dat uses spaces and a leading '#' on the header.
class TableWriter {
public:
  TableWriter(std::ostream& os, TableFormat fmt) : os_(os), fmt_(fmt) {}
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);

private:
  std::ostream& os_;
  TableFormat fmt_;
};

/// Splits a line on commas, trimming spaces.
[[nodiscard]] std::vector<std::string> split_csv_line(const std::string& line);

/// Whitespace-separated square matrix.
[[nodiscard]] Eigen::MatrixXd read_square_matrix(std::istream& is);

}  // namespace infogeo
