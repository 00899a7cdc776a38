#include "infogeo/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace infogeo {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void TableWriter::header(const std::vector<std::string>& names) {
  if (fmt_ == TableFormat::dat) os_ << "# ";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os_ << (fmt_ == TableFormat::csv ? "," : " ");
    os_ << names[i];
  }
  os_ << '\n';
}

void TableWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os_ << (fmt_ == TableFormat::csv ? "," : " ");
    os_ << format_number(values[i]);
  }
  os_ << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

Eigen::MatrixXd read_square_matrix(std::istream& is) {
  std::vector<double> vals;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("matrix file: bad number '" + tok + "'");
    }
    if (pos != tok.size()) throw std::invalid_argument("matrix file: bad number '" + tok + "'");
    vals.push_back(v);
  }
  const auto n = static_cast<long>(std::llround(std::sqrt(static_cast<double>(vals.size()))));
  if (vals.empty() || static_cast<std::size_t>(n * n) != vals.size())
    throw std::invalid_argument("matrix file: expected n*n entries");
  Eigen::MatrixXd m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = vals[static_cast<std::size_t>(i * n + j)];
  return m;
}

}  // namespace infogeo
