#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cc4::io {

/// Shortest decimal text that parses back to the same double; '.' separator
/// regardless of locale. Non-finite values become "nan", "inf" or "-inf".
std::string format_double(double value);

/// RFC-4180 field quoting: fields containing ',', '"', CR or LF are wrapped in
/// double quotes with embedded quotes doubled.
std::string csv_field(std::string_view text);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);
  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& empty();
  CsvWriter& optional(const std::optional<double>& value);
  void end_row();

 private:
  void separator();
  std::ostream& out_;
  bool row_started_ = false;
};

/// Parses a strictly formatted finite double (whole string consumed).
std::optional<double> parse_double(std::string_view text);

}  // namespace cc4::io
