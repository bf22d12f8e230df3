#pragma once

#include <istream>
#include <string>
#include <vector>

#include "ewpo/multivariate.hpp"
#include "ewpo/types.hpp"

namespace ewpo {

/// Selected numeric columns of a CSV file with a header row.
struct Dataset {
  std::string y_name;
  std::vector<std::string> x_names;
  std::vector<double> y;
  std::vector<std::vector<double>> x;  // one vector per regressor column

  std::size_t rows() const { return y.size(); }

  /// Requires exactly one regressor.
  Sample to_sample() const;
  DesignMatrix to_design() const;
};

/// Reads RFC-4180 style CSV (quoted fields, "" escapes, CRLF tolerated).
/// Throws DataError naming a missing column, or the 1-based data row and
/// column of a cell that is empty, unparseable or non-finite, or when fewer
/// than two rows remain.
Dataset parse_dataset(std::istream& in, const std::string& y_col, const std::vector<std::string>& x_cols);
Dataset parse_dataset_file(const std::string& path, const std::string& y_col,
                           const std::vector<std::string>& x_cols);

}  // namespace ewpo
