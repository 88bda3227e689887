#include "moplms/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "moplms/detail/format.hpp"

namespace moplms {
namespace {

std::size_t count_fields(const std::string& line) {
  std::size_t fields = 1;
  for (char c : line) {
    if (c == ',') ++fields;
  }
  return fields;
}

// Full-cell numeric parse; partial consumption (e.g. "1.5x") is rejected.
double parse_cell(const std::string& cell, const std::string& path,
                  std::size_t row, std::size_t col) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw std::runtime_error("CSV '" + path + "': non-numeric cell at row " +
                             std::to_string(row) + ", column " +
                             std::to_string(col));
  }
  if (!std::isfinite(value)) {
    throw std::runtime_error("CSV '" + path + "': non-finite value at row " +
                             std::to_string(row) + ", column " +
                             std::to_string(col));
  }
  return value;
}

}  // namespace

Matrix read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("CSV '" + path + "': cannot open file");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("CSV '" + path + "': file is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::size_t cols = count_fields(line);

  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t physical_row = 1;  // the header is row 1
  while (std::getline(in, line)) {
    ++physical_row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (count_fields(line) != cols) {
      throw std::runtime_error(
          "CSV '" + path + "': row " + std::to_string(physical_row) + " has " +
          std::to_string(count_fields(line)) + " fields, expected " +
          std::to_string(cols));
    }
    std::size_t col = 1;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= line.size(); ++pos) {
      if (pos == line.size() || line[pos] == ',') {
        data.push_back(parse_cell(line.substr(start, pos - start), path,
                                  physical_row, col));
        start = pos + 1;
        ++col;
      }
    }
    ++rows;
  }
  if (rows == 0) {
    throw std::runtime_error("CSV '" + path +
                             "': header only, no data rows");
  }
  return Matrix(rows, cols, std::move(data));
}

void write_csv(const Matrix& m, const std::string& path) {
  std::vector<std::string> header;
  header.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    header.push_back("c" + std::to_string(j));
  }
  write_csv(m, path, header);
}

void write_csv(const Matrix& m, const std::string& path,
               const std::vector<std::string>& header) {
  if (header.size() != m.cols()) {
    throw std::invalid_argument("write_csv: " + std::to_string(header.size()) +
                                " header names for " + std::to_string(m.cols()) +
                                " columns");
  }
  std::string body;
  body.reserve(16 + 24 * m.values().size());
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != 0) body += ',';
    body += header[j];
  }
  body += '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j != 0) body += ',';
      body += detail::format_real(m(i, j));
    }
    body += '\n';
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("write_csv: cannot open '" + path +
                             "' for writing");
  }
  out << body;
  if (!out.flush()) {
    throw std::runtime_error("write_csv: write to '" + path + "' failed");
  }
}

}  // namespace moplms
