#pragma once

#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>

#include "moplms/matrix.hpp"

namespace moplms::detail {

// 17 significant digits uniquely identify a double, so every writer in the
// project emits values that round-trip bit for bit through a correctly
// rounding parser.
inline std::string format_real(double value) {
  if (!std::isfinite(value)) {
    throw std::runtime_error("refusing to write a non-finite value");
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline void append_reals_json(std::string& out, std::span<const double> values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out += ',';
    out += format_real(values[i]);
  }
  out += ']';
}

inline void append_matrix_json(std::string& out, const std::string& name,
                               const Matrix& m) {
  out += '"';
  out += name;
  out += "\":{\"rows\":" + std::to_string(m.rows()) +
         ",\"cols\":" + std::to_string(m.cols()) + ",\"data\":";
  append_reals_json(out, m.values());
  out += '}';
}

}  // namespace moplms::detail
