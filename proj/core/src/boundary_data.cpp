#include "gpot/boundary_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "gpot/error.hpp"
#include "line_reader.hpp"

namespace gpot {

double BoundaryData::value_at(std::string_view id) const {
    if (auto it = vertex_values.find(id); it != vertex_values.end()) return it->second;
    if (rule) return rule(id);
    return default_value;
}

double BoundaryData::end_value(EndId end) const {
    auto it = end_values.find(end);
    if (it == end_values.end()) throw InputError("no boundary value for end " + std::to_string(to_index(end)));
    return it->second;
}

double BoundaryData::listed_bound() const {
    double m = std::abs(default_value);
    for (const auto& [id, v] : vertex_values) m = std::max(m, std::abs(v));
    for (const auto& [e, v] : end_values) m = std::max(m, std::abs(v));
    return m;
}

BoundaryData BoundaryData::shifted(double offset) const {
    BoundaryData out;
    for (const auto& [id, v] : vertex_values) out.vertex_values.emplace(id, v - offset);
    for (const auto& [e, v] : end_values) out.end_values.emplace(e, v - offset);
    out.default_value = default_value - offset;
    if (rule) out.rule = [inner = rule, offset](std::string_view id) { return inner(id) - offset; };
    return out;
}

BoundaryData parse_boundary_data(std::istream& in, std::string_view source) {
    LineReader reader(in, source);
    BoundaryData data;
    std::vector<std::string> tokens;
    while (reader.next(tokens)) {
        const std::string& kind = tokens[0];
        if (kind == "default") {
            if (tokens.size() != 2) reader.fail("expected: default <real>");
            data.default_value = reader.parse_real(tokens[1]);
        } else if (kind == "vertex") {
            if (tokens.size() != 3) reader.fail("expected: vertex <id> <real>");
            if (!data.vertex_values.emplace(tokens[1], reader.parse_real(tokens[2])).second)
                reader.fail("duplicate value for vertex " + tokens[1]);
        } else if (kind == "end") {
            if (tokens.size() != 3) reader.fail("expected: end <index> <real>");
            std::uint32_t index = 0;
            const auto& t = tokens[1];
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), index);
            if (ec != std::errc() || ptr != t.data() + t.size()) reader.fail("bad end index '" + t + "'");
            if (!data.end_values.emplace(EndId{index}, reader.parse_real(tokens[2])).second)
                reader.fail("duplicate value for end " + t);
        } else {
            reader.fail("unknown directive '" + kind + "'");
        }
    }
    return data;
}

BoundaryData load_boundary_data(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open boundary data file " + path.string());
    return parse_boundary_data(in, path.string());
}

}  // namespace gpot
