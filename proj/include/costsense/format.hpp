#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace costsense {

/// Shortest decimal text that parses back to exactly `value`.
std::string shortest_decimal(double value);

/// Fixed-point text with `digits` decimals.
std::string fixed_decimal(double value, int digits);

/// Strict full-string parses; throw Error(invalid_argument) naming `what`.
double parse_double(std::string_view text, std::string_view what);
unsigned long long parse_unsigned(std::string_view text, std::string_view what);

/// Splits on `sep`, trimming ASCII whitespace around each piece.
std::vector<std::string> split_trimmed(std::string_view text, char sep);
std::string_view trim(std::string_view text);

}  // namespace costsense
