#pragma once

#include <map>
#include <vector>

#include "gpot/graph.hpp"
#include "gpot/potential.hpp"

namespace gpot::testing {

using Dense = std::vector<std::vector<double>>;

Dense dense(const StructureFunction& f);
Dense dense(const WeightedGraph& graph);
Dense multiply(const Dense& a, const Dense& b);

/// Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(Dense a, std::vector<double> b);

/// Harmonic extension of the pinned values by a dense solve.
VertexFunction dense_harmonic(const WeightedGraph& graph, const std::map<VertexIndex, double>& pinned);

/// G(x, y) = ((I − Q)^{-1})(x, y) for the interior-killed kernel Q; x interior.
double dense_green(const WeightedGraph& graph, VertexIndex x, VertexIndex y);

}  // namespace gpot::testing
