#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xxz {

// Shortest round-trip decimal representation, '.' separator, independent of
// the global locale.
std::string format_double(double value);
std::string format_optional(const std::optional<double>& value);

// Writes one header row then data rows; fields containing ',', '"' or a
// newline are quoted.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  std::size_t columns() const { return columns_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
};

std::string csv_escape(std::string_view field);

}  // namespace xxz
