#pragma once
// Internal: pretty-printed JSON with every floating-point value written at 17
// significant digits (the same formatting as the CSV exports), so that reports
// are byte-reproducible and lossless. Non-finite values become null.

#include "motility/io.hpp"

#include <json.hpp>

#include <cmath>
#include <string>

namespace motility::detail {

inline void write_json(const nlohmann::ordered_json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
      write_json(it.value(), out, depth + 1);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) out += ",\n";
      out += pad;
      write_json(j[k], out, depth + 1);
    }
    out += "\n" + close + "]";
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    out += std::isfinite(v) ? format_number(v) : "null";
  } else {
    out += j.dump();
  }
}

inline std::string json_text(const nlohmann::ordered_json& j) {
  std::string out;
  write_json(j, out, 0);
  out += '\n';
  return out;
}

}  // namespace motility::detail
