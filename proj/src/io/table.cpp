#include "pdclab/io/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pdclab/errors.hpp"

namespace pdclab::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0"; // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string format_integer(std::int64_t v) { return std::to_string(v); }

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("CSV row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto &r : rows_) line(r);
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

double parse_cell(const std::string &cell, const std::string &path, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw InvalidInput(path + ":" + std::to_string(line) + ": '" + cell + "' is not a number");
  return v;
}

} // namespace

std::vector<std::vector<double>> read_csv_columns(const std::string &path,
                                                  const std::vector<std::string> &columns,
                                                  const std::vector<std::string> &optional) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open data file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("data file '" + path + "' is empty");
  const auto header = split_csv_line(line);

  auto index_of = [&](const std::string &name) -> long {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<long>(i);
    return -1;
  };
  std::vector<long> idx;
  for (const auto &c : columns) {
    const long i = index_of(c);
    if (i < 0) throw InvalidInput("data file '" + path + "' lacks column '" + c + "'");
    idx.push_back(i);
  }
  for (const auto &c : optional) idx.push_back(index_of(c));

  std::vector<std::vector<double>> out(idx.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0) continue;
      if (static_cast<std::size_t>(idx[k]) >= cells.size())
        throw InvalidInput(path + ":" + std::to_string(lineno) + ": missing cells");
      out[k].push_back(parse_cell(cells[static_cast<std::size_t>(idx[k])], path, lineno));
    }
  }
  return out;
}

} // namespace pdclab::io
