#include "splitq/text.hpp"

#include <charconv>
#include <system_error>

#include "splitq/errors.hpp"

namespace splitq {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        throw InvalidParameter("format_double: value not representable");
    }
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw InvalidParameter("not a number: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace splitq
