#pragma once

#include <cstddef>
#include <random>

#include "gpot/boundary_data.hpp"
#include "gpot/graph.hpp"
#include "gpot/potential.hpp"

namespace gpot::testing {

using Rng = std::mt19937_64;

/// Path a–b–c with absorbing ends and λ(b,a) = λ(b,c) = 1/2.
WeightedGraph path_abc();

struct RandomWindowOptions {
    std::size_t min_vertices = 3;
    std::size_t max_vertices = 200;
    double self_loop_probability = 0.3;
    std::size_t extra_edges = 2;  // per vertex, on average
};

/// Connected, quasi-reversible window with at least one boundary point: a
/// random spanning tree on the interior plus extra symmetric edges, and each
/// boundary point hung from a random interior vertex.
WeightedGraph random_window(Rng& rng, const RandomWindowOptions& options = {});

/// Listed values uniform in [lo, hi] for every boundary point.
BoundaryData random_data(Rng& rng, const WeightedGraph& graph, double lo = -1.0, double hi = 1.0);

VertexFunction random_function(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0);

/// Pointwise max of one to four harmonic extensions of random data.
VertexFunction random_subharmonic(Rng& rng, const WeightedGraph& graph);

/// Random sparse real kernel with roughly `per_row` entries per row.
StructureFunction random_structure(Rng& rng, std::size_t n, std::size_t per_row);

}  // namespace gpot::testing
