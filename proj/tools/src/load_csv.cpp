#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "drmel/error.hpp"
#include "drmel_cli/cli.hpp"

namespace drmel::cli {

namespace {

// Splits one CSV record; handles double-quoted fields with "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::string& path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("column '" + name + "' not found in header of " + path);
}

}  // namespace

MultiSampleData load_csv(const std::string& path, const std::string& group_col,
                         const std::string& value_col, const BasisSpec& basis,
                         const std::optional<std::string>& baseline) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file " + path);

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      for (auto& f : split_record(line, line_no)) header.push_back(trim(f));
      break;
    }
  }
  if (header.empty()) throw DataError(path + ": missing header row");
  const auto gi = column_index(header, group_col, path);
  const auto vi = column_index(header, value_col, path);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> groups;
  std::unordered_map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_record(line, line_no);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << path << " line " << line_no << ": expected " << header.size() << " fields, found "
         << fields.size();
      throw DataError(os.str());
    }
    const std::string label = trim(fields[gi]);
    const std::string text = trim(fields[vi]);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
      throw DataError(path + " line " + std::to_string(line_no) + ": value '" + text +
                      "' is not a finite real number");
    }
    if (auto why = basis.domain_violation(v)) {
      throw DataError(path + " line " + std::to_string(line_no) + ": " + *why);
    }
    auto [it, fresh] = index.try_emplace(label, labels.size());
    if (fresh) {
      labels.push_back(label);
      groups.emplace_back();
    }
    groups[it->second].push_back(v);
  }

  if (baseline) {
    auto it = index.find(*baseline);
    if (it == index.end()) throw DataError("baseline group '" + *baseline + "' has no observations");
    const auto k = it->second;
    std::rotate(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(k),
                labels.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    std::rotate(groups.begin(), groups.begin() + static_cast<std::ptrdiff_t>(k),
                groups.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  }
  if (groups.empty()) throw DataError(path + ": no observations");
  if (groups.size() < 2) {
    throw DataError(path + ": only one group ('" + labels[0] + "'); at least two are required");
  }
  return MultiSampleData::build(groups, basis, labels);
}

}  // namespace drmel::cli
