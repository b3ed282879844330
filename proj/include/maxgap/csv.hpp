#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace maxgap::csv {

/// Shortest text that parses back to the same double; "inf", "-inf", "nan"
/// for non-finite values.
std::string format_double(double value);

/// Inverse of format_double. Throws std::invalid_argument on malformed text.
double parse_double(std::string_view text);

/// Splits one CSV line on commas. Fields never contain commas or quotes here.
std::vector<std::string> split_line(std::string_view line);

/// Writes comma-separated rows terminated by LF.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(&out) {}

  Writer& field(std::string_view text);
  Writer& field(const char* text) { return field(std::string_view(text)); }
  Writer& field(double value) { return field(format_double(value)); }
  Writer& field(std::uint64_t value) { return field(std::to_string(value)); }
  Writer& field(int value) { return field(std::to_string(value)); }
  Writer& field(bool value) { return field(value ? std::string_view("1") : std::string_view("0")); }
  Writer& empty() { return field(std::string_view()); }
  void end_row();

  void header(const std::vector<std::string_view>& names);

 private:
  std::ostream* out_;
  bool first_ = true;
};

}  // namespace maxgap::csv
