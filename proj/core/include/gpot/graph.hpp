#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gpot {

using VertexIndex = std::uint32_t;

/// Rows are accepted as stochastic when |sum - 1| <= kWeightTolerance, and a
/// vertex is a Kiselman boundary point when its self-loop weight is at least
/// 1 - kWeightTolerance.
inline constexpr double kWeightTolerance = 1e-9;

struct Entry {
    VertexIndex target;
    double weight;
};

/// Finite directed graph with sparse non-negative weights (a weight function
/// when it validates). Vertices keep insertion order; each row is sorted by
/// target index and never stores a zero.
///
/// Immutable once built; every member is a pure read.
class WeightedGraph {
public:
    WeightedGraph() = default;

    std::size_t size() const { return names_.size(); }
    std::size_t edge_count() const { return entries_.size(); }

    const std::string& name(VertexIndex v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<VertexIndex> find(std::string_view id) const;
    /// Throws InputError("vertex not found: <id>").
    VertexIndex at(std::string_view id) const;

    std::span<const Entry> row(VertexIndex v) const {
        return {entries_.data() + offsets_[v], entries_.data() + offsets_[v + 1]};
    }
    double weight(VertexIndex from, VertexIndex to) const;
    double row_sum(VertexIndex v) const;

    bool is_boundary(VertexIndex v) const { return boundary_[v] != 0; }

private:
    friend class GraphBuilder;

    std::vector<std::string> names_;
    std::unordered_map<std::string, VertexIndex> index_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Entry> entries_;
    std::vector<char> boundary_;
};

/// Accumulates vertices and edges. Vertices are created on first mention.
/// Rejects duplicate edges, zero weights, non-finite weights and malformed ids;
/// weight-function axioms are left to validate().
class GraphBuilder {
public:
    VertexIndex add_vertex(std::string_view id);
    void add_edge(std::string_view from, std::string_view to, double weight);
    void add_edge(VertexIndex from, VertexIndex to, double weight);

    std::size_t size() const { return names_.size(); }

    WeightedGraph build() &&;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, VertexIndex> index_;
    std::vector<std::vector<Entry>> rows_;
};

struct Violation {
    std::string kind;  // negative-weight | weight-range | row-sum | dangling
    std::string details;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    /// One `VIOLATION <kind> <details>` line per entry.
    std::string to_text() const;
};

ValidationReport validate(const WeightedGraph& graph);

/// Throws InputError carrying the report when the graph is not a weight function.
void require_valid(const WeightedGraph& graph);

/// Sorts vertex indices by vertex id (the order all set-valued results use).
std::vector<VertexIndex> sorted_by_id(const WeightedGraph& graph, std::vector<VertexIndex> vertices);

std::vector<VertexIndex> kiselman_boundary(const WeightedGraph& graph);
std::vector<VertexIndex> interior(const WeightedGraph& graph);

/// N_0(a) = {a}; N_{k+1}(a) = vertices reached by one positive-weight step from N_k(a).
std::vector<VertexIndex> neighborhood(const WeightedGraph& graph, VertexIndex a, std::size_t k);

/// Union of all N_k(a): forward reachability over positive weights.
std::vector<VertexIndex> component(const WeightedGraph& graph, VertexIndex a);

/// C(a) = X for every interior a (vacuously true without interior).
bool is_connected(const WeightedGraph& graph);
/// C(a) meets the boundary for every interior a.
bool is_boundary_connected(const WeightedGraph& graph);

struct QuasiReversibility {
    bool holds = true;
    /// Directed edges (x, y) with neither a reverse edge nor an absorbing y.
    std::vector<std::pair<VertexIndex, VertexIndex>> violations;
};

QuasiReversibility quasi_reversibility(const WeightedGraph& graph);

/// Sparse real-valued kernel on the vertex set of a graph; rows hold only
/// nonzero entries, sorted by target.
class StructureFunction {
public:
    explicit StructureFunction(std::size_t n) : rows_(n) {}

    static StructureFunction identity(std::size_t n);
    static StructureFunction from_graph(const WeightedGraph& graph);

    std::size_t size() const { return rows_.size(); }
    double operator()(VertexIndex x, VertexIndex y) const;
    /// Setting zero removes the entry.
    void set(VertexIndex x, VertexIndex y, double value);
    std::span<const Entry> row(VertexIndex x) const { return rows_[x]; }
    double row_sum(VertexIndex x) const;
    std::size_t nonzeros() const;

private:
    friend StructureFunction diamond(const StructureFunction&, const StructureFunction&);
    std::vector<std::vector<Entry>> rows_;
};

/// (f ⋄ g)(x, y) = sum_z f(x, z) g(z, y). Exact zeros are dropped from the result.
StructureFunction diamond(const StructureFunction& f, const StructureFunction& g);

/// k-fold product of the graph's weights (identity for k = 0).
StructureFunction diamond_power(const WeightedGraph& graph, unsigned k);

/// Line-oriented format: `edge <from> <to> <weight>`, `#` comments.
WeightedGraph parse_graph(std::istream& in, std::string_view source = "<input>");
WeightedGraph load_graph(const std::filesystem::path& path);
void write_graph(std::ostream& out, const WeightedGraph& graph);

}  // namespace gpot
