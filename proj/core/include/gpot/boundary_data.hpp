#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace gpot {

/// Identifies an end (a point at infinity) of a lazily presented graph.
enum class EndId : std::uint32_t {};

inline std::uint32_t to_index(EndId e) { return static_cast<std::uint32_t>(e); }

/// Boundary values f on ∂X and on each end. Boundary vertices that are not
/// listed take `rule(id)` when a rule is set, else `default_value`.
struct BoundaryData {
    std::map<std::string, double, std::less<>> vertex_values;
    std::map<EndId, double> end_values;
    double default_value = 0.0;
    std::function<double(std::string_view)> rule;

    double value_at(std::string_view id) const;
    /// Throws InputError when no value was supplied for the end.
    double end_value(EndId end) const;

    /// Largest |value| among listed values, end values and the default (the
    /// rule is not sampled).
    double listed_bound() const;

    /// Every value shifted by -offset (rule included).
    BoundaryData shifted(double offset) const;
};

/// `vertex <id> <real>`, `end <index> <real>`, `default <real>` lines.
BoundaryData parse_boundary_data(std::istream& in, std::string_view source = "<input>");
BoundaryData load_boundary_data(const std::filesystem::path& path);

}  // namespace gpot
