#include "output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace qpa::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null:
      return "nan";
    case Json::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case Json::value_t::number_integer:
      return std::to_string(v.get<long long>());
    case Json::value_t::number_unsigned:
      return std::to_string(v.get<unsigned long long>());
    case Json::value_t::number_float:
      return format_number(v.get<double>());
    case Json::value_t::string: {
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + "\"";
    }
    default:
      return cell(Json(v.dump()));
  }
}

}  // namespace

void write_csv(std::ostream& os, const Table& table, const Json& header) {
  for (const auto& [key, value] : header.items()) {
    os << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
       << "\n";
  }
  if (table.rows.empty()) return;
  bool first = true;
  for (const auto& [key, value] : table.rows.front().items()) {
    os << (first ? "" : ",") << key;
    first = false;
  }
  os << "\n";
  for (const Json& row : table.rows) {
    first = true;
    for (const auto& [key, value] : table.rows.front().items()) {
      os << (first ? "" : ",") << (row.contains(key) ? cell(row.at(key)) : std::string());
      first = false;
    }
    os << "\n";
  }
}

}  // namespace qpa::cli
