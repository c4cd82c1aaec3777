#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpot/boundary_data.hpp"
#include "gpot/dirichlet.hpp"
#include "gpot/ends.hpp"
#include "gpot/graph.hpp"
#include "gpot/potential.hpp"

namespace gpot {

/// Path of window vertices joining two boundary points; consecutive vertices
/// are adjacent and there are no repeats.
struct Slice {
    std::vector<VertexIndex> vertices;
    int radius = 0;  // the path stays within distances [radius, radius + 1]
};

struct SlicePair {
    EndId end{};
    Slice inside;
    Slice outside;
};

/// Per end, one slice in the band at r_in and one at r_out, each separating
/// the end's frontier from the base, disjoint from each other and from the
/// other ends' slices. Throws DomainError "slices not disjoint or not
/// separating" when no such pair is found.
std::vector<SlicePair> choose_slices(const Truncation& truncation, int r_in, int r_out);

/// Induced graph on Y = X ∪ (out-neighbors of X). Vertices of Y∖X that are
/// interior in the window form the interface and get a unit self-loop.
struct Subdomain {
    WeightedGraph graph;
    std::vector<VertexIndex> to_window;  // local index -> window index
    std::vector<VertexIndex> interface;  // local indices, sorted by id
    std::vector<char> in_core;           // local index is in X (not only in Y∖X)
    std::optional<EndId> owns_end;
    EndMap end_map;  // local frontier vertices -> end
};

/// End subdomains first (ordered by end), then the endless one.
std::vector<Subdomain> build_subdomains(const Truncation& truncation, const std::vector<SlicePair>& slices);

struct TraceRow {
    std::size_t sweep = 0;
    std::size_t subdomain = 0;
    double max_delta = 0.0;
};

struct AlternationTrace {
    std::vector<TraceRow> rows;
    /// snapshots[s][i]: solution on subdomain i after sweep s (kept on request).
    std::vector<std::vector<VertexFunction>> snapshots;
};

void write_trace_csv(std::ostream& out, const AlternationTrace& trace);

struct SchwarzParams {
    int radius = 0;
    int r_in = 0;
    int r_out = 0;
    double tol = 1e-8;
    std::size_t max_sweeps = 100;
    std::vector<double> continuity_epsilons{0.01};
    std::size_t direct_limit = 5000;  // larger subdomains use the iterative solver
    bool keep_snapshots = true;
};

struct SchwarzResult {
    Solution solution;  // on truncation.window
    Truncation truncation;
    std::vector<SlicePair> slices;
    std::vector<Subdomain> subdomains;
    AlternationTrace trace;
};

/// Alternates between the end subdomains and the endless subdomain until a
/// sweep changes no value by more than tol. Interfaces start at the sup of
/// all supplied boundary and end values. Throws std::logic_error when the
/// monotone chain breaks, DomainError on unstable ends, discontinuous data,
/// missing slices or an exhausted sweep budget.
SchwarzResult schwarz_solve(const LazyGraph& graph, const BoundaryData& data, const SchwarzParams& params);

}  // namespace gpot
