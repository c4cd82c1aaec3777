#include <charconv>
#include <string>

#include "gpot/ends.hpp"
#include "gpot/error.hpp"

namespace gpot::families {

namespace {

long long parse_int(std::string_view s, std::string_view whole) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw InputError("malformed vertex id: " + std::string(whole));
    return v;
}

struct Point {
    long long x, y;
};

Point parse_point(const std::string& id) {
    auto comma = id.find(',');
    if (comma == std::string::npos) throw InputError("malformed vertex id: " + id);
    return {parse_int(std::string_view(id).substr(0, comma), id), parse_int(std::string_view(id).substr(comma + 1), id)};
}

std::string point(long long x, long long y) { return std::to_string(x) + "," + std::to_string(y); }

std::vector<LazyNeighbor> lattice_row(const std::string& id, long long floor, long long ceiling) {
    Point p = parse_point(id);
    if (p.y < floor || p.y > ceiling) throw InputError("vertex outside the family: " + id);
    if (p.y == floor || p.y == ceiling) return {{id, 1.0}};
    return {{point(p.x - 1, p.y), 0.25}, {point(p.x + 1, p.y), 0.25}, {point(p.x, p.y - 1), 0.25},
            {point(p.x, p.y + 1), 0.25}};
}

std::vector<std::string> lattice_adjacent(const std::string& id, long long floor, long long ceiling) {
    Point p = parse_point(id);
    if (p.y < floor || p.y > ceiling) throw InputError("vertex outside the family: " + id);
    if (p.y == floor) return {point(p.x, p.y + 1)};
    if (p.y == ceiling) return {point(p.x, p.y - 1)};
    return {point(p.x - 1, p.y), point(p.x + 1, p.y), point(p.x, p.y - 1), point(p.x, p.y + 1)};
}

}  // namespace

LazyGraph half_plane() {
    constexpr long long kNoCeiling = std::numeric_limits<long long>::max();
    return LazyGraph(
        "0,1", [](const std::string& id) { return lattice_row(id, 0, kNoCeiling); },
        [](const std::string& id) { return lattice_adjacent(id, 0, kNoCeiling); }, "half-plane");
}

LazyGraph ladder() {
    return LazyGraph(
        "0,1", [](const std::string& id) { return lattice_row(id, 0, 3); },
        [](const std::string& id) { return lattice_adjacent(id, 0, 3); }, "ladder");
}

LazyGraph tree(unsigned branching) {
    if (branching < 2) throw InputError("tree branching must be at least 2");
    const std::string sep = branching > 10 ? "." : "";
    auto parent_of = [sep](const std::string& id) -> std::string {
        if (sep.empty()) return id.substr(0, id.size() - 1);
        return id.substr(0, id.rfind('.'));
    };
    auto children = [branching, sep](const std::string& id) {
        std::vector<std::string> out;
        for (unsigned c = 0; c < branching; ++c) out.push_back(id + sep + std::to_string(c));
        return out;
    };
    auto check = [](const std::string& id) {
        if (id.empty() || id[0] != 't') throw InputError("vertex outside the family: " + id);
    };
    auto row = [=](const std::string& id) {
        check(id);
        if (id == "t") return std::vector<LazyNeighbor>{{id, 1.0}};
        const double w = 1.0 / (branching + 1);
        std::vector<LazyNeighbor> out{{parent_of(id), w}};
        for (auto& c : children(id)) out.push_back({std::move(c), w});
        return out;
    };
    auto adjacent = [=](const std::string& id) {
        check(id);
        auto out = children(id);
        if (id != "t") out.push_back(parent_of(id));
        return out;
    };
    return LazyGraph("t", row, adjacent, "tree:" + std::to_string(branching));
}

LazyGraph line() {
    auto row = [](const std::string& id) {
        long long n = parse_int(id, id);
        if (n == 0) return std::vector<LazyNeighbor>{{id, 1.0}};
        return std::vector<LazyNeighbor>{{std::to_string(n - 1), 0.5}, {std::to_string(n + 1), 0.5}};
    };
    auto adjacent = [](const std::string& id) {
        long long n = parse_int(id, id);
        return std::vector<std::string>{std::to_string(n - 1), std::to_string(n + 1)};
    };
    return LazyGraph("0", row, adjacent, "line");
}

LazyGraph parse(std::string_view spec) {
    if (spec == "half-plane") return half_plane();
    if (spec == "ladder") return ladder();
    if (spec == "line") return line();
    if (spec.substr(0, 5) == "tree:") {
        long long b = 0;
        auto digits = spec.substr(5);
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), b);
        if (ec != std::errc{} || p != digits.data() + digits.size() || b < 2 || b > 1000)
            throw InputError("tree branching must be an integer in [2, 1000]: " + std::string(spec));
        return tree(static_cast<unsigned>(b));
    }
    throw InputError("unknown family: " + std::string(spec) + " (expected half-plane, ladder, tree:<b> or line)");
}

}  // namespace gpot::families
