#include "drmel/csv_writer.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace drmel {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      os << f;
      continue;
    }
    os << '"';
    for (char c : f) {
      if (c == '"') os << '"';
      os << c;
    }
    os << '"';
  }
  os << '\n';
}

}  // namespace drmel
