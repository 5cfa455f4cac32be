#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pdclab::io {

/// Locale-independent number text: '.' decimal, 12 significant digits,
/// "nan"/"inf" for non-finite values.
std::string format_number(double v);
std::string format_integer(std::int64_t v);

/// CSV with a header row, stable column order and LF line endings.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Cells are preformatted; the row width must match the header.
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string> &header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Numeric columns of a CSV file with a header row. Every named column must
/// exist; cells must parse as numbers.
std::vector<std::vector<double>> read_csv_columns(const std::string &path,
                                                  const std::vector<std::string> &columns,
                                                  const std::vector<std::string> &optional = {});

} // namespace pdclab::io
