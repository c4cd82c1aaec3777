#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gpot/ends.hpp"
#include "gpot/graph.hpp"
#include "gpot/potential.hpp"

namespace gpot {

/// interior_killed zeroes the rows of boundary points, so mass reaching the
/// boundary leaves the walk; literal keeps the absorbing self-loops.
enum class GreensKernel { interior_killed, literal };

struct GreensOptions {
    std::size_t max_order = 1000;  // K
    double tail_tol = 1e-10;
    GreensKernel kernel = GreensKernel::interior_killed;
};

/// Partial sum G_K(x,y) = Σ_{k<=K} λ^⋄k(x,y) with an empirical verdict.
///
/// Terms are paired (k even with k+1) so that bipartite parity does not hide
/// decay. The series counts as summable when the walk dies out, or when the
/// paired increments shrink geometrically (per-step ratio below 0.99 across
/// the last ten pairs); summation stops early once the geometric tail
/// estimate drops below tail_tol.
struct GreensEntry {
    double value = 0.0;
    std::size_t order = 0;  // last k included
    double last_increment = 0.0;
    double decay_ratio = 1.0;  // per-step ratio over the last ten pairs
    double tail_bound = 0.0;   // +inf when no geometric decay was seen
    bool summable = false;
};

GreensEntry greens_function(const WeightedGraph& window, VertexIndex x, VertexIndex y, const GreensOptions& options = {});

/// x ↦ G_K(x,y) for every vertex, with the verdict taken on the sup over x
/// of the increments.
struct GreensColumn {
    VertexFunction values;
    GreensEntry summary;
};

GreensColumn greens_column(const WeightedGraph& window, VertexIndex y, const GreensOptions& options = {});

/// Search for N₁ < k_max and N₂ < dist_max with λ^⋄k(x,y₀) < ε whenever
/// N₂ < dist(x,y₀) <= dist_max and N₁ < k <= k_max. λ^⋄k is the literal
/// kernel on the window spanned by the decomposition's ball, and dist is the
/// undirected distance from y₀ inside that ball. The smallest N₂ is reported,
/// then the smallest N₁ for it.
struct VanishingReport {
    bool found = false;
    std::size_t n1 = 0;
    int n2 = 0;
    double epsilon = 0.0;
    std::size_t k_max = 0;
    int dist_max = 0;
    /// max over k <= k_max of λ^⋄k(x,y₀) among vertices at each distance 0..dist_max.
    std::vector<double> peak_by_distance;
    std::string to_text() const;
};

VanishingReport check_vanishing_at_infinity(const EndDecomposition& decomposition, std::string_view y0,
                                            double epsilon, std::size_t k_max, int dist_max);

}  // namespace gpot
