#include "gpot/potential.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <stdexcept>

#include "gpot/error.hpp"
#include "gpot/format.hpp"
#include "gpot/parallel.hpp"
#include "line_reader.hpp"

namespace gpot {

namespace {

void require_total(const WeightedGraph& g, const VertexFunction& f) {
    if (f.size() != g.size())
        throw InputError("vertex function has " + std::to_string(f.size()) + " values for a graph with " +
                         std::to_string(g.size()) + " vertices");
}

bool locally_constant(const WeightedGraph& g, const VertexFunction& f, VertexIndex x, double tol) {
    for (const Entry& e : g.row(x))
        if (e.weight > 0.0 && std::abs(f[e.target] - f[x]) > tol) return false;
    return true;
}

// Neighbor with the largest value; ties go to the smallest id.
VertexIndex argmax_neighbor(const WeightedGraph& g, const VertexFunction& f, VertexIndex x) {
    std::optional<VertexIndex> best;
    for (const Entry& e : g.row(x)) {
        if (e.weight <= 0.0) continue;
        if (!best || f[e.target] > f[*best] || (f[e.target] == f[*best] && g.name(e.target) < g.name(*best)))
            best = e.target;
    }
    return *best;
}

}  // namespace

double max_abs_difference(const VertexFunction& a, const VertexFunction& b) {
    if (a.size() != b.size()) throw InputError("vertex function size mismatch");
    double m = 0.0;
    for (VertexIndex v = 0; v < a.size(); ++v) m = std::max(m, std::abs(a[v] - b[v]));
    return m;
}

double laplacian(const WeightedGraph& g, const VertexFunction& f, VertexIndex x) {
    require_total(g, f);
    if (x >= g.size()) throw InputError("vertex not found");
    if (g.is_boundary(x)) return 0.0;
    double sum = 0.0;
    for (const Entry& e : g.row(x)) sum += e.weight * (f[e.target] - f[x]);
    return sum;
}

double mean_value_defect(const WeightedGraph& g, const VertexFunction& f, VertexIndex x) {
    require_total(g, f);
    if (g.is_boundary(x)) return 0.0;
    double avg = 0.0;
    for (const Entry& e : g.row(x)) avg += e.weight * f[e.target];
    return avg - f[x];
}

bool is_harmonic(const WeightedGraph& g, const VertexFunction& f, double tol) {
    for (VertexIndex x = 0; x < g.size(); ++x)
        if (std::abs(laplacian(g, f, x)) > tol) return false;
    return true;
}

bool is_subharmonic(const WeightedGraph& g, const VertexFunction& f, double tol) {
    for (VertexIndex x = 0; x < g.size(); ++x)
        if (laplacian(g, f, x) < -tol) return false;
    return true;
}

double interior_residual(const WeightedGraph& g, const VertexFunction& f) {
    require_total(g, f);
    double r = 0.0;
    for (VertexIndex x = 0; x < g.size(); ++x)
        if (!g.is_boundary(x)) r = std::max(r, std::abs(laplacian(g, f, x)));
    return r;
}

VertexFunction average_step(const WeightedGraph& g, const VertexFunction& f) {
    require_total(g, f);
    VertexFunction out(g.size());
    parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t x = begin; x < end; ++x) {
            double sum = 0.0;
            for (const Entry& e : g.row(static_cast<VertexIndex>(x))) sum += e.weight * f[e.target];
            out[static_cast<VertexIndex>(x)] = sum;
        }
    });
    return out;
}

VertexFunction omega_k(const WeightedGraph& g, const VertexFunction& f, std::size_t k) {
    VertexFunction current = f;
    for (std::size_t i = 0; i < k; ++i) current = average_step(g, current);
    return current;
}

IncreasingPath maximally_increasing_path(const WeightedGraph& g, const VertexFunction& f, VertexIndex start,
                                         const PathOptions& options) {
    require_total(g, f);
    if (start >= g.size()) throw InputError("vertex not found");
    if (g.is_boundary(start)) throw InputError("path start " + g.name(start) + " is a boundary point");

    std::vector<char> frontier(g.size(), 0);
    for (VertexIndex v : options.frontier) frontier.at(v) = 1;
    const std::size_t max_len = options.max_len == 0 ? g.size() : options.max_len;

    // Level-set search for a vertex where f is not locally constant.
    VertexIndex y0 = start;
    if (locally_constant(g, f, start, options.tol)) {
        const double level = f[start];
        std::vector<char> seen(g.size(), 0);
        std::deque<VertexIndex> queue{start};
        seen[start] = 1;
        std::optional<VertexIndex> found;
        while (!queue.empty() && !found) {
            VertexIndex v = queue.front();
            queue.pop_front();
            if (!g.is_boundary(v) && !locally_constant(g, f, v, options.tol)) {
                found = v;
                break;
            }
            std::vector<VertexIndex> next;
            for (const Entry& e : g.row(v))
                if (e.weight > 0.0 && !seen[e.target] && std::abs(f[e.target] - level) <= options.tol)
                    next.push_back(e.target);
            for (VertexIndex n : sorted_by_id(g, std::move(next))) {
                seen[n] = 1;
                queue.push_back(n);
            }
        }
        if (!found) throw DomainError("stalled: f is constant on the level set of " + g.name(start));
        y0 = *found;
    }

    IncreasingPath path;
    path.vertices.push_back(y0);
    for (;;) {
        VertexIndex cur = path.vertices.back();
        if (g.is_boundary(cur)) {
            path.terminal = frontier[cur] ? TerminalKind::frontier : TerminalKind::boundary;
            return path;
        }
        if (path.vertices.size() - 1 >= max_len) {
            path.terminal = TerminalKind::frontier;
            return path;
        }
        VertexIndex next = argmax_neighbor(g, f, cur);
        if (!(f[next] > f[cur]))
            throw DomainError("not subharmonic at " + g.name(cur) + ": no neighbor with a larger value");
        path.vertices.push_back(next);
    }
}

std::string check_increasing_path(const WeightedGraph& g, const VertexFunction& f, const IncreasingPath& path) {
    if (path.vertices.empty()) return "empty path";
    std::vector<char> seen(g.size(), 0);
    for (std::size_t i = 0; i < path.vertices.size(); ++i) {
        VertexIndex v = path.vertices[i];
        if (seen[v]) return "repeated vertex " + g.name(v);
        seen[v] = 1;
        if (i == 0) continue;
        VertexIndex u = path.vertices[i - 1];
        if (!(g.weight(u, v) > 0.0)) return "no edge " + g.name(u) + " -> " + g.name(v);
        if (!(f[v] > f[u])) return "not strictly increasing at " + g.name(v);
        for (const Entry& e : g.row(u))
            if (e.weight > 0.0 && f[e.target] > f[v]) return "step to " + g.name(v) + " is not an argmax";
    }
    if (path.terminal == TerminalKind::boundary && !g.is_boundary(path.vertices.back()))
        return "boundary terminal is not a boundary point";
    return {};
}

MaximumPrincipleReport check_maximum_principle(const WeightedGraph& g, const VertexFunction& f, double tol) {
    require_total(g, f);
    MaximumPrincipleReport r;
    if (g.size() == 0) return r;
    r.sup_all = *std::max_element(f.values().begin(), f.values().end());
    for (VertexIndex v = 0; v < g.size(); ++v) {
        if (g.is_boundary(v)) {
            r.sup_boundary = r.sup_boundary ? std::max(*r.sup_boundary, f[v]) : f[v];
        } else if (f[v] == r.sup_all) {
            if (!r.interior_argmax || g.name(v) < g.name(*r.interior_argmax)) r.interior_argmax = v;
        }
    }
    r.sups_agree = r.sup_boundary && std::abs(r.sup_all - *r.sup_boundary) <= tol;
    r.attained_at_interior = r.interior_argmax.has_value();
    if (r.interior_argmax) {
        bool constant = true;
        for (VertexIndex y : component(g, *r.interior_argmax))
            if (std::abs(f[y] - r.sup_all) > tol) constant = false;
        r.constant_on_component = constant;
    }
    return r;
}

VertexFunction extend_by_zero(const WeightedGraph& g, const std::map<VertexIndex, double>& boundary_values) {
    VertexFunction out(g.size(), 0.0);
    for (const auto& [v, value] : boundary_values) {
        if (v >= g.size()) throw InputError("vertex not found");
        if (!g.is_boundary(v)) throw InputError("extension by zero: " + g.name(v) + " is not a boundary point");
        if (!(value >= 0.0))
            throw InputError("extension by zero requires non-negative data; got " + format_real(value) + " at " +
                             g.name(v));
        out[v] = value;
    }
    if (!is_subharmonic(g, out, 0.0)) throw std::logic_error("extension by zero is not subharmonic");
    return out;
}

VertexFunction parse_vertex_function(std::istream& in, const WeightedGraph& g, std::string_view source) {
    LineReader reader(in, source);
    std::vector<std::string> tokens;
    std::vector<double> values(g.size(), 0.0);
    std::vector<char> set(g.size(), 0);
    while (reader.next(tokens)) {
        if (tokens[0] != "value" || tokens.size() != 3) reader.fail("expected: value <vertex> <real>");
        auto v = g.find(tokens[1]);
        if (!v) reader.fail("vertex not found: " + tokens[1]);
        if (set[*v]) reader.fail("duplicate value for " + tokens[1]);
        values[*v] = reader.parse_real(tokens[2]);
        set[*v] = 1;
    }
    for (VertexIndex v = 0; v < g.size(); ++v)
        if (!set[v]) throw InputError(std::string(source) + ": no value for vertex " + g.name(v));
    return VertexFunction(std::move(values));
}

VertexFunction load_vertex_function(const std::filesystem::path& path, const WeightedGraph& g) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open function file " + path.string());
    return parse_vertex_function(in, g, path.string());
}

}  // namespace gpot
