#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gpot/boundary_data.hpp"
#include "gpot/graph.hpp"

namespace gpot {

struct LazyNeighbor {
    std::string id;
    double weight;
};

/// A locally finite, possibly infinite weighted graph given by a base vertex
/// and a row procedure. The optional adjacency procedure lists every vertex
/// joined to v by a positive weight in either direction; without it the
/// out-neighbors stand in for the undirected neighborhood.
///
/// Both procedures must be pure and deterministic.
class LazyGraph {
public:
    using RowFn = std::function<std::vector<LazyNeighbor>(const std::string&)>;
    using AdjacencyFn = std::function<std::vector<std::string>(const std::string&)>;

    LazyGraph(std::string base, RowFn row, AdjacencyFn adjacent = {}, std::string description = "custom");

    /// Wraps a finite graph; adjacency includes reverse edges.
    static LazyGraph from_graph(WeightedGraph graph, std::string base);

    const std::string& base() const { return base_; }
    const std::string& description() const { return description_; }

    std::vector<LazyNeighbor> row(const std::string& v) const { return row_(v); }
    std::vector<std::string> adjacent(const std::string& v) const;

private:
    std::string base_;
    RowFn row_;
    AdjacencyFn adjacent_;
    std::string description_;
};

namespace families {

/// ℤ × ℕ with an absorbing x-axis; interior points step to their four
/// lattice neighbors with weight 1/4. Base (0,1). One end.
LazyGraph half_plane();

/// ℤ × {0,1,2,3}: two interior rails joined by rungs, between absorbing rails
/// y = 0 and y = 3. Base (0,1). Two ends.
LazyGraph ladder();

/// Rooted b-ary tree with an absorbing root; other vertices step uniformly to
/// their parent and b children. Base is the root.
LazyGraph tree(unsigned branching);

/// ℤ with an absorbing origin; simple random walk elsewhere. Base 0.
LazyGraph line();

/// `half-plane | ladder | tree:<b> | line`.
LazyGraph parse(std::string_view spec);

}  // namespace families

inline constexpr VertexIndex kOutside = std::numeric_limits<VertexIndex>::max();

/// Breadth-first exploration of a lazy graph around its base, by undirected
/// distance. Row entries pointing beyond the ball carry target kOutside.
struct Ball {
    int radius = 0;
    std::vector<std::string> names;
    std::unordered_map<std::string, VertexIndex> index;
    std::vector<int> distance;
    std::vector<char> absorbing;  // lazy row is a unit self-loop

    std::vector<std::size_t> adjacency_offsets{0};
    std::vector<VertexIndex> adjacency;

    std::vector<std::size_t> row_offsets{0};
    std::vector<Entry> rows;

    std::size_t size() const { return names.size(); }
    std::optional<VertexIndex> find(const std::string& id) const;
    std::span<const VertexIndex> neighbors(VertexIndex v) const {
        return {adjacency.data() + adjacency_offsets[v], adjacency.data() + adjacency_offsets[v + 1]};
    }
    std::span<const Entry> row(VertexIndex v) const {
        return {rows.data() + row_offsets[v], rows.data() + row_offsets[v + 1]};
    }
};

/// Throws InputError("invalid lazy row at <v>") on non-stochastic rows.
std::shared_ptr<const Ball> explore_ball(const LazyGraph& graph, int radius);

/// Components of (ball of the enclosing radius) minus (closed ball of one
/// probe radius) that reach the outermost shell.
struct ProbeLevel {
    int radius = 0;
    std::vector<std::vector<VertexIndex>> components;  // each in ball order; ordered by smallest id
    std::vector<std::size_t> parent;                   // containing component one level down
};

struct EndDecomposition {
    std::shared_ptr<const Ball> ball;
    std::vector<int> radii;  // probe radii, then the enclosing radius
    std::vector<ProbeLevel> levels;
    std::vector<EndId> ends;
    bool stable = false;
    std::string note;

    int enclosing_radius() const { return radii.back(); }
    std::size_t end_count() const { return ends.size(); }

    /// End whose outermost-probe component contains the ball vertex.
    std::optional<EndId> end_of(VertexIndex v) const;
    /// Component of the ball vertex at a probe level, if any.
    std::optional<std::size_t> component_at(std::size_t level, VertexIndex v) const;
    /// Number of ball vertices on the enclosing shell that belong to the end.
    std::size_t shell_size(EndId end) const;
    /// `end <id> frontier-size <n>` lines.
    std::string to_text() const;

private:
    friend EndDecomposition decompose(std::shared_ptr<const Ball>, std::vector<int>);
    std::vector<std::vector<std::int32_t>> membership_;  // per level and ball vertex, -1 if none
};

/// (R/2, 2R/3, 5R/6, R) with the probes capped at R - 2, deduplicated; the
/// last entry encloses the others.
std::vector<int> default_radii(int radius);

EndDecomposition decompose(std::shared_ptr<const Ball> ball, std::vector<int> radii);

/// Needs at least three increasing radii; stable when the two outermost
/// probes see the same components.
EndDecomposition detect_ends(const LazyGraph& graph, std::vector<int> radii);

using EndMap = std::map<VertexIndex, EndId>;

/// Finite window of radius R: frontier vertices (distance R, rows leaving the
/// window) become absorbing and are tagged with their end. Window vertex
/// indices coincide with ball indices.
struct Truncation {
    WeightedGraph window;
    std::vector<VertexIndex> frontier;  // sorted by id
    EndMap end_of_frontier;
    int radius = 0;
    EndDecomposition ends;

    int distance(VertexIndex v) const { return ends.ball->distance[v]; }
    bool is_frontier(VertexIndex v) const { return end_of_frontier.count(v) != 0; }
};

Truncation truncate(const LazyGraph& graph, int radius);
/// Window over an already explored ball; the decomposition must enclose it.
Truncation truncate(EndDecomposition decomposition);

struct SequenceClass {
    bool converges = false;
    EndId end{};
};

/// End whose component thread contains the tail of the sequence (every
/// element after its last visit to each probe ball), or divergent. Throws
/// DomainError("needs larger radii") for elements outside the explored ball.
SequenceClass classify_sequence(const EndDecomposition& decomposition, std::span<const std::string> sequence);

struct ContinuityItem {
    double epsilon = 0.0;
    EndId end{};
    bool continuous = true;
    std::size_t violators = 0;  // boundary vertices of the end's region with |f - f(end)| > epsilon
    int max_violator_distance = -1;
    std::size_t shell_violators = 0;
};

struct ContinuityReport {
    std::vector<ContinuityItem> items;
    bool continuous() const;
    std::string to_text() const;
};

/// Truncation-level certificate: for each epsilon and end, boundary vertices
/// violating |f(x) - f(end)| <= epsilon must stay off the enclosing shell.
ContinuityReport check_continuity_at_infinity(const BoundaryData& data, const EndDecomposition& decomposition,
                                              std::span<const double> epsilons);

}  // namespace gpot
