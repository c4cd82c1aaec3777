#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gpot/graph.hpp"

namespace gpot {

inline constexpr double kDefaultHarmonicTolerance = 1e-9;

/// Real function on the vertices of a graph, indexed like the graph.
class VertexFunction {
public:
    VertexFunction() = default;
    explicit VertexFunction(std::size_t n, double fill = 0.0) : values_(n, fill) {}
    explicit VertexFunction(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const { return values_.size(); }
    double operator[](VertexIndex v) const { return values_[v]; }
    double& operator[](VertexIndex v) { return values_[v]; }

    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    friend bool operator==(const VertexFunction&, const VertexFunction&) = default;

private:
    std::vector<double> values_;
};

/// Sup-norm of the difference; sizes must match.
double max_abs_difference(const VertexFunction& a, const VertexFunction& b);

/// Δf(x) = Σ λ(x,ζ)[f(ζ) − f(x)]; exactly 0 at boundary points.
double laplacian(const WeightedGraph& graph, const VertexFunction& f, VertexIndex x);

/// Σ λ(x,ζ) f(ζ) − f(x): the mean-value form of the same quantity.
double mean_value_defect(const WeightedGraph& graph, const VertexFunction& f, VertexIndex x);

bool is_harmonic(const WeightedGraph& graph, const VertexFunction& f, double tol = kDefaultHarmonicTolerance);
bool is_subharmonic(const WeightedGraph& graph, const VertexFunction& f, double tol = kDefaultHarmonicTolerance);

/// max over interior vertices of |Δf|.
double interior_residual(const WeightedGraph& graph, const VertexFunction& f);

/// x ↦ Σ λ(x,ζ) f(ζ).
VertexFunction average_step(const WeightedGraph& graph, const VertexFunction& f);

/// x ↦ ω_x^k(f), computed as k successive averaging steps.
VertexFunction omega_k(const WeightedGraph& graph, const VertexFunction& f, std::size_t k);

enum class TerminalKind { boundary, frontier };

struct IncreasingPath {
    std::vector<VertexIndex> vertices;
    TerminalKind terminal = TerminalKind::boundary;
};

struct PathOptions {
    std::size_t max_len = 0;  // 0 means |X|
    double tol = kDefaultHarmonicTolerance;
    /// Boundary vertices that stand in for points beyond a truncation; reaching
    /// one ends the path with TerminalKind::frontier.
    std::vector<VertexIndex> frontier;
};

/// Greedy strictly-increasing walk: from a vertex where f is not locally
/// constant (found by a level-set search from start if needed), repeatedly
/// steps to the neighbor of largest value, ties broken by smallest id.
///
/// Throws DomainError "stalled" when f is constant on the reachable level set,
/// and "not subharmonic" when no larger neighbor exists at an interior vertex.
IncreasingPath maximally_increasing_path(const WeightedGraph& graph, const VertexFunction& f, VertexIndex start,
                                         const PathOptions& options = {});

/// Re-checks adjacency, strict increase, the argmax property and absence of
/// repeats. Returns an empty string when valid, else a description.
std::string check_increasing_path(const WeightedGraph& graph, const VertexFunction& f, const IncreasingPath& path);

struct MaximumPrincipleReport {
    double sup_all = 0.0;
    std::optional<double> sup_boundary;  // empty when the boundary is empty
    bool sups_agree = false;
    bool attained_at_interior = false;
    std::optional<VertexIndex> interior_argmax;
    /// Set when the sup is attained at an interior vertex: whether f is
    /// constant (within tol) on that vertex's component.
    std::optional<bool> constant_on_component;
};

MaximumPrincipleReport check_maximum_principle(const WeightedGraph& graph, const VertexFunction& f,
                                               double tol = kDefaultHarmonicTolerance);

/// f on the boundary, 0 elsewhere. Values must be non-negative and keyed by
/// boundary vertices (InputError otherwise).
VertexFunction extend_by_zero(const WeightedGraph& graph, const std::map<VertexIndex, double>& boundary_values);

/// `value <vertex> <real>` lines; every vertex must be covered.
VertexFunction parse_vertex_function(std::istream& in, const WeightedGraph& graph,
                                     std::string_view source = "<input>");
VertexFunction load_vertex_function(const std::filesystem::path& path, const WeightedGraph& graph);

}  // namespace gpot
