#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bwslex::detail {

// Splits one CSV record. Supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv(std::string_view line, char delim = ',');

// Quotes a field only when it contains the delimiter, a quote or a newline.
std::string csv_field(std::string_view value, char delim = ',');

std::string join_csv(const std::vector<std::string>& fields, char delim = ',');

// Reads one line, dropping a trailing '\r'. Returns false at end of input.
bool read_line(std::istream& in, std::string& line);

// Strict decimal parse of the whole string.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

// Shortest representation that round-trips.
std::string format_double(double v);

// Fixed number of decimals.
std::string format_fixed(double v, int decimals);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace bwslex::detail
