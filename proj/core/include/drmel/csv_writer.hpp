#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace drmel {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Writes one CSV record, quoting fields that need it.
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace drmel
