#include "ewpo/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace ewpo {
namespace {

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& column) {
  const std::string s = trim(raw);
  const std::string where = " at data row " + std::to_string(row) + ", column '" + column + "'";
  if (s.empty()) throw DataError("empty cell" + where);
  double v = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("unparseable cell '" + s + "'" + where);
  }
  if (!std::isfinite(v)) throw DataError("non-finite cell '" + s + "'" + where);
  return v;
}

}  // namespace

Sample Dataset::to_sample() const {
  if (x.size() != 1) throw DataError("a univariate sample needs exactly one regressor column");
  return Sample(x.front(), y);
}

DesignMatrix Dataset::to_design() const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (std::size_t i = 0; i < rows(); ++i) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x[k][i];
  }
  return DesignMatrix(std::move(X), Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size())));
}

Dataset parse_dataset(std::istream& in, const std::string& y_col, const std::vector<std::string>& x_cols) {
  if (x_cols.empty()) throw DataError("at least one regressor column is required");
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: a header row is required");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto header = split_record(line);
  for (auto& h : header) h = trim(h);

  auto column_index = [&](const std::string& name) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    throw DataError("column '" + name + "' not found in header");
  };

  Dataset ds;
  ds.y_name = y_col;
  ds.x_names = x_cols;
  const std::size_t y_idx = column_index(y_col);
  std::vector<std::size_t> x_idx;
  for (const auto& name : x_cols) x_idx.push_back(column_index(name));
  ds.x.resize(x_cols.size());

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_record(line);
    if (fields.size() != header.size()) {
      throw DataError("data row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    ds.y.push_back(parse_cell(fields[y_idx], row, y_col));
    for (std::size_t k = 0; k < x_idx.size(); ++k) ds.x[k].push_back(parse_cell(fields[x_idx[k]], row, x_cols[k]));
  }
  if (ds.rows() < 2) throw DataError("insufficient observations: need at least 2 data rows");
  return ds;
}

Dataset parse_dataset_file(const std::string& path, const std::string& y_col, const std::vector<std::string>& x_cols) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_dataset(in, y_col, x_cols);
}

}  // namespace ewpo
