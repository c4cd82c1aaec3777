#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "gpot/boundary_data.hpp"
#include "gpot/ends.hpp"
#include "gpot/graph.hpp"

namespace gpot {

enum class WalkKind { absorbed, escaped, censored };

struct WalkOutcome {
    WalkKind kind = WalkKind::censored;
    VertexIndex vertex = 0;  // where the walk stopped
    std::optional<EndId> end;  // set when escaped through a frontier vertex
    std::size_t steps = 0;
};

inline constexpr std::size_t kDefaultMaxSteps = 1'000'000;
inline constexpr const char* kRngName = "mt19937_64";

/// Sub-stream seed of walk `index` under `seed` (splitmix64 finalizer of seed + index).
std::uint64_t walk_seed(std::uint64_t seed, std::uint64_t index);

/// Next vertex from row x for a uniform u in [0,1): the first target whose
/// cumulative weight exceeds u times the row sum.
VertexIndex sample_next(const WeightedGraph& window, VertexIndex x, double u);

/// One walk driven by mt19937_64(seed). Stops at a Kiselman boundary point
/// (escaped when the point is in end_map) or after max_steps steps.
WalkOutcome run_walk(const WeightedGraph& window, const EndMap& end_map, VertexIndex start, std::uint64_t seed,
                     std::size_t max_steps = kDefaultMaxSteps);

struct Estimate {
    double mean = 0.0;
    double half_width_95 = 0.0;  // 1.96 times the sample standard error
    std::size_t n_walks = 0;
    double censored_fraction = 0.0;
    std::uint64_t seed = 0;
    bool unreliable = false;  // more than half of the walks were censored

    /// `mean half_width n censored seed`
    std::string to_text() const;
};

/// Mean of the boundary or end value where each walk stops, censored walks
/// excluded. Walk i uses walk_seed(seed, i); results are combined in walk
/// order, so the estimate does not depend on the thread count.
Estimate estimate_harmonic(const WeightedGraph& window, const BoundaryData& data, const EndMap& end_map,
                           VertexIndex x, std::size_t n_walks, std::uint64_t seed,
                           std::size_t max_steps = kDefaultMaxSteps);

}  // namespace gpot
