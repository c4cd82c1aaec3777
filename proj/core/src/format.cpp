#include "gpot/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>

#include "gpot/error.hpp"
#include "line_reader.hpp"

namespace gpot {

std::string format_real(double value) {
    if (value == 0.0) value = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

bool LineReader::next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        tokens.clear();
        std::istringstream ss(line);
        for (std::string t; ss >> t;) tokens.push_back(std::move(t));
        if (!tokens.empty()) return true;
    }
    return false;
}

void LineReader::fail(const std::string& message) const {
    throw InputError(source_ + ":" + std::to_string(line_) + ": " + message);
}

double LineReader::parse_real(const std::string& token) const {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (!token.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) fail("not a finite real: '" + token + "'");
    return value;
}

}  // namespace gpot
