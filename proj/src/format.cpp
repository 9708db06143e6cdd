#include "spotrank/format.hpp"

#include <array>
#include <charconv>

namespace spotrank {

namespace {

template <typename... Args>
std::string_view render(std::array<char, 64>& buf, double x, Args... args) {
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x + 0.0, args...);
    return {buf.data(), static_cast<std::size_t>(end - buf.data())};
}

}  // namespace

void append_g12(std::string& out, double x) {
    std::array<char, 64> buf;
    out += render(buf, x, std::chars_format::general, 12);
}

std::string format_g12(double x) {
    std::string s;
    append_g12(s, x);
    return s;
}

double round_g12(double x) {
    std::array<char, 64> buf;
    const auto text = render(buf, x, std::chars_format::general, 12);
    double out = 0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

std::string format_fixed6(double x) {
    std::array<char, 64> buf;
    return std::string(render(buf, x, std::chars_format::fixed, 6));
}

std::string format_short(double x) {
    std::array<char, 64> buf;
    return std::string(render(buf, x));
}

}  // namespace spotrank
