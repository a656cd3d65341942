#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qpa/serialize.hpp"

namespace qpa::cli {

// Rows share the key order of the first row.
struct Table {
  std::vector<Json> rows;
};

std::string format_number(double v);

void write_csv(std::ostream& os, const Table& table, const Json& header);

}  // namespace qpa::cli
