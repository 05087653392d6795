#pragma once

#include <string>
#include <string_view>

namespace splitq {

/// Shortest decimal representation that round-trips to the same double
/// (std::to_chars). Used for all CSV and report output.
std::string format_double(double v);

/// Strict full-string parse; throws InvalidParameter on anything else.
double parse_double(std::string_view text);

}  // namespace splitq
