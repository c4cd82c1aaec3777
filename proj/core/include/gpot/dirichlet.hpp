#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpot/boundary_data.hpp"
#include "gpot/ends.hpp"
#include "gpot/graph.hpp"
#include "gpot/potential.hpp"

namespace gpot {

enum class SolveMethod { iterative, direct, schwarz, montecarlo };

std::string_view to_string(SolveMethod method);

struct Solution {
    VertexFunction values;
    SolveMethod method = SolveMethod::direct;
    std::size_t iterations = 0;
    double residual = 0.0;  // max |Δh| over interior vertices, recomputed after solving
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> warnings;
};

/// Value prescribed at every Kiselman boundary vertex of the window: frontier
/// vertices listed in end_map take their end's value, the rest take data.
std::map<VertexIndex, double> pinned_values(const WeightedGraph& window, const BoundaryData& data,
                                            const EndMap& end_map);

/// Admissible starting point for the two monotone halves: subharmonic
/// functions equal to f⁺ and f⁻ on the boundary.
struct InitialGuess {
    VertexFunction plus;
    VertexFunction minus;
};

struct IterativeOptions {
    double tol = 1e-8;
    std::size_t max_iter = 1'000'000;
    std::optional<InitialGuess> initial;
};

/// Splits f into f⁺ − f⁻, extends each by zero and averages until both the
/// sweep increment and the bound sup(f)·P(walk not yet absorbed) fall to
/// tol/2 on each half. Each half is checked to be non-decreasing (slack
/// 1e-12) on every sweep.
///
/// Throws DomainError when an interior vertex cannot reach the boundary or
/// max_iter is exceeded. A quasi-reversibility failure only adds a warning.
Solution solve_iterative(const WeightedGraph& window, const BoundaryData& data, const EndMap& end_map,
                         const IterativeOptions& options = {});
/// Same, with the boundary values already resolved (one per boundary point).
Solution solve_iterative(const WeightedGraph& window, const std::map<VertexIndex, double>& pinned,
                         const IterativeOptions& options = {});

/// Sparse LU on the interior system h(x) − Σ λ(x,ζ)h(ζ) = 0 with boundary
/// values moved to the right-hand side.
Solution solve_direct(const WeightedGraph& window, const BoundaryData& data, const EndMap& end_map);
Solution solve_direct(const WeightedGraph& window, const std::map<VertexIndex, double>& pinned);

struct OneEndedOptions {
    double tol = 1e-8;
    /// Truncation radii, increasing; at least two.
    std::vector<int> radii;
    /// Allowed disagreement between the two largest radii; tol when unset.
    std::optional<double> ladder_tol;
    std::vector<double> continuity_epsilons{0.01};
    SolveMethod method = SolveMethod::iterative;  // iterative or direct
};

struct OneEndedResult {
    Solution solution;
    Truncation truncation;  // the largest window
    double ladder_difference = 0.0;
    ContinuityReport continuity;
};

/// Solves on truncations at each radius with the frontier clamped to the end
/// value, after normalizing the data by that value. Throws DomainError
/// "multiple ends", "unstable ends", "not continuous at infinity" or "no
/// convergence in R".
OneEndedResult solve_one_ended(const LazyGraph& graph, const BoundaryData& data, const OneEndedOptions& options);

/// `# meta: k=v ...` then `vertex,value` rows in window order.
void write_solution_csv(std::ostream& out, const WeightedGraph& window, const Solution& solution);

}  // namespace gpot
