#include "steerlab/format.hpp"

#include <array>
#include <charconv>

namespace steerlab {

std::string format_number(double value) {
    if (value == 0.0) {
        value = 0.0;
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
    return {buf.data(), res.ptr};
}

} // namespace steerlab
