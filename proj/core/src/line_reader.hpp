#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace gpot {

// Shared tokenizer for the line-oriented input formats: strips `#` comments,
// skips blank lines, and reports errors with source:line context.
class LineReader {
public:
    LineReader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

    bool next(std::vector<std::string>& tokens);
    [[noreturn]] void fail(const std::string& message) const;
    double parse_real(const std::string& token) const;

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
};

}  // namespace gpot
