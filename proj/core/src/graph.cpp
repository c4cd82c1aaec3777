#include "gpot/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <sstream>

#include "gpot/error.hpp"
#include "gpot/format.hpp"

namespace gpot {

namespace {

bool valid_id(std::string_view id) {
    if (id.empty()) return false;
    return std::none_of(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c) || !std::isprint(c); });
}

std::vector<char> forward_reach(const WeightedGraph& g, std::span<const VertexIndex> sources) {
    std::vector<char> seen(g.size(), 0);
    std::deque<VertexIndex> queue;
    for (VertexIndex s : sources) {
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        for (const Entry& e : g.row(v)) {
            if (e.weight > 0.0 && !seen[e.target]) {
                seen[e.target] = 1;
                queue.push_back(e.target);
            }
        }
    }
    return seen;
}

// Reverse adjacency over positive weights, CSR.
struct Reverse {
    std::vector<std::size_t> offsets;
    std::vector<VertexIndex> sources;
};

Reverse reverse_of(const WeightedGraph& g) {
    Reverse r;
    r.offsets.assign(g.size() + 1, 0);
    for (VertexIndex v = 0; v < g.size(); ++v)
        for (const Entry& e : g.row(v))
            if (e.weight > 0.0) ++r.offsets[e.target + 1];
    for (std::size_t i = 0; i < g.size(); ++i) r.offsets[i + 1] += r.offsets[i];
    r.sources.resize(r.offsets.back());
    std::vector<std::size_t> fill(r.offsets.begin(), r.offsets.end() - 1);
    for (VertexIndex v = 0; v < g.size(); ++v)
        for (const Entry& e : g.row(v))
            if (e.weight > 0.0) r.sources[fill[e.target]++] = v;
    return r;
}

std::vector<char> backward_reach(const WeightedGraph& g, std::span<const VertexIndex> targets) {
    Reverse r = reverse_of(g);
    std::vector<char> seen(g.size(), 0);
    std::deque<VertexIndex> queue;
    for (VertexIndex t : targets) {
        if (!seen[t]) {
            seen[t] = 1;
            queue.push_back(t);
        }
    }
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        for (std::size_t i = r.offsets[v]; i < r.offsets[v + 1]; ++i) {
            VertexIndex s = r.sources[i];
            if (!seen[s]) {
                seen[s] = 1;
                queue.push_back(s);
            }
        }
    }
    return seen;
}

std::vector<VertexIndex> collect(const std::vector<char>& flags) {
    std::vector<VertexIndex> out;
    for (VertexIndex v = 0; v < flags.size(); ++v)
        if (flags[v]) out.push_back(v);
    return out;
}

}  // namespace

std::optional<VertexIndex> WeightedGraph::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

VertexIndex WeightedGraph::at(std::string_view id) const {
    if (auto v = find(id)) return *v;
    throw InputError("vertex not found: " + std::string(id));
}

double WeightedGraph::weight(VertexIndex from, VertexIndex to) const {
    auto r = row(from);
    auto it = std::lower_bound(r.begin(), r.end(), to, [](const Entry& e, VertexIndex t) { return e.target < t; });
    return (it != r.end() && it->target == to) ? it->weight : 0.0;
}

double WeightedGraph::row_sum(VertexIndex v) const {
    double sum = 0.0;
    for (const Entry& e : row(v)) sum += e.weight;
    return sum;
}

VertexIndex GraphBuilder::add_vertex(std::string_view id) {
    if (!valid_id(id)) throw InputError("invalid vertex id '" + std::string(id) + "'");
    auto [it, inserted] = index_.try_emplace(std::string(id), static_cast<VertexIndex>(names_.size()));
    if (inserted) {
        names_.emplace_back(id);
        rows_.emplace_back();
    }
    return it->second;
}

void GraphBuilder::add_edge(std::string_view from, std::string_view to, double weight) {
    VertexIndex f = add_vertex(from);
    VertexIndex t = add_vertex(to);
    add_edge(f, t, weight);
}

void GraphBuilder::add_edge(VertexIndex from, VertexIndex to, double weight) {
    if (from >= names_.size() || to >= names_.size()) throw InputError("edge endpoint out of range");
    if (!std::isfinite(weight)) throw InputError("non-finite weight on edge " + names_[from] + " -> " + names_[to]);
    if (weight == 0.0) throw InputError("stored zero weight on edge " + names_[from] + " -> " + names_[to]);
    auto& row = rows_[from];
    if (std::any_of(row.begin(), row.end(), [to](const Entry& e) { return e.target == to; }))
        throw InputError("duplicate edge " + names_[from] + " -> " + names_[to]);
    row.push_back({to, weight});
}

WeightedGraph GraphBuilder::build() && {
    WeightedGraph g;
    g.names_ = std::move(names_);
    g.index_ = std::move(index_);
    g.offsets_.assign(1, 0);
    g.offsets_.reserve(g.names_.size() + 1);
    g.boundary_.assign(g.names_.size(), 0);
    for (VertexIndex v = 0; v < rows_.size(); ++v) {
        auto& row = rows_[v];
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.target < b.target; });
        for (const Entry& e : row) {
            g.entries_.push_back(e);
            if (e.target == v && e.weight >= 1.0 - kWeightTolerance) g.boundary_[v] = 1;
        }
        g.offsets_.push_back(g.entries_.size());
    }
    rows_.clear();
    return g;
}

std::string ValidationReport::to_text() const {
    std::string out;
    for (const auto& v : violations) out += "VIOLATION " + v.kind + " " + v.details + "\n";
    return out;
}

ValidationReport validate(const WeightedGraph& g) {
    ValidationReport report;
    for (VertexIndex v = 0; v < g.size(); ++v) {
        auto row = g.row(v);
        if (row.empty()) {
            report.violations.push_back({"dangling", g.name(v)});
            continue;
        }
        for (const Entry& e : row) {
            if (e.weight < 0.0)
                report.violations.push_back(
                    {"negative-weight", g.name(v) + " " + g.name(e.target) + " " + format_real(e.weight)});
            else if (e.weight > 1.0 + kWeightTolerance)
                report.violations.push_back(
                    {"weight-range", g.name(v) + " " + g.name(e.target) + " " + format_real(e.weight)});
        }
        double sum = g.row_sum(v);
        if (std::abs(sum - 1.0) > kWeightTolerance)
            report.violations.push_back({"row-sum", g.name(v) + " " + format_real(sum)});
    }
    return report;
}

void require_valid(const WeightedGraph& g) {
    auto report = validate(g);
    if (!report.ok()) throw InputError("graph is not a weight function:\n" + report.to_text());
}

std::vector<VertexIndex> sorted_by_id(const WeightedGraph& g, std::vector<VertexIndex> vertices) {
    std::sort(vertices.begin(), vertices.end(), [&g](VertexIndex a, VertexIndex b) { return g.name(a) < g.name(b); });
    return vertices;
}

std::vector<VertexIndex> kiselman_boundary(const WeightedGraph& g) {
    std::vector<VertexIndex> out;
    for (VertexIndex v = 0; v < g.size(); ++v)
        if (g.is_boundary(v)) out.push_back(v);
    return sorted_by_id(g, std::move(out));
}

std::vector<VertexIndex> interior(const WeightedGraph& g) {
    std::vector<VertexIndex> out;
    for (VertexIndex v = 0; v < g.size(); ++v)
        if (!g.is_boundary(v)) out.push_back(v);
    return sorted_by_id(g, std::move(out));
}

std::vector<VertexIndex> neighborhood(const WeightedGraph& g, VertexIndex a, std::size_t k) {
    if (a >= g.size()) throw InputError("vertex not found");
    std::vector<char> current(g.size(), 0);
    current[a] = 1;
    for (std::size_t step = 0; step < k; ++step) {
        std::vector<char> next(g.size(), 0);
        bool any = false;
        for (VertexIndex v = 0; v < g.size(); ++v) {
            if (!current[v]) continue;
            for (const Entry& e : g.row(v))
                if (e.weight > 0.0) {
                    next[e.target] = 1;
                    any = true;
                }
        }
        current = std::move(next);
        if (!any) break;
    }
    return sorted_by_id(g, collect(current));
}

std::vector<VertexIndex> component(const WeightedGraph& g, VertexIndex a) {
    if (a >= g.size()) throw InputError("vertex not found");
    VertexIndex src[] = {a};
    return sorted_by_id(g, collect(forward_reach(g, src)));
}

bool is_connected(const WeightedGraph& g) {
    auto inner = interior(g);
    if (inner.empty()) return true;
    // Every interior vertex reaches a0 and a0 reaches everything.
    VertexIndex a0[] = {inner.front()};
    auto fwd = forward_reach(g, a0);
    if (std::find(fwd.begin(), fwd.end(), 0) != fwd.end()) return false;
    auto bwd = backward_reach(g, a0);
    return std::all_of(inner.begin(), inner.end(), [&](VertexIndex v) { return bwd[v] != 0; });
}

bool is_boundary_connected(const WeightedGraph& g) {
    auto bnd = kiselman_boundary(g);
    auto reaches = backward_reach(g, bnd);
    for (VertexIndex v = 0; v < g.size(); ++v)
        if (!g.is_boundary(v) && !reaches[v]) return false;
    return true;
}

QuasiReversibility quasi_reversibility(const WeightedGraph& g) {
    QuasiReversibility out;
    for (VertexIndex x = 0; x < g.size(); ++x) {
        for (const Entry& e : g.row(x)) {
            if (e.target == x || e.weight <= 0.0) continue;
            if (g.weight(e.target, x) > 0.0 || g.is_boundary(e.target)) continue;
            out.violations.emplace_back(x, e.target);
        }
    }
    std::sort(out.violations.begin(), out.violations.end(), [&g](const auto& a, const auto& b) {
        if (g.name(a.first) != g.name(b.first)) return g.name(a.first) < g.name(b.first);
        return g.name(a.second) < g.name(b.second);
    });
    out.holds = out.violations.empty();
    return out;
}

StructureFunction StructureFunction::identity(std::size_t n) {
    StructureFunction s(n);
    for (VertexIndex v = 0; v < n; ++v) s.rows_[v].push_back({v, 1.0});
    return s;
}

StructureFunction StructureFunction::from_graph(const WeightedGraph& g) {
    StructureFunction s(g.size());
    for (VertexIndex v = 0; v < g.size(); ++v) {
        auto r = g.row(v);
        s.rows_[v].assign(r.begin(), r.end());
    }
    return s;
}

double StructureFunction::operator()(VertexIndex x, VertexIndex y) const {
    const auto& r = rows_[x];
    auto it = std::lower_bound(r.begin(), r.end(), y, [](const Entry& e, VertexIndex t) { return e.target < t; });
    return (it != r.end() && it->target == y) ? it->weight : 0.0;
}

void StructureFunction::set(VertexIndex x, VertexIndex y, double value) {
    auto& r = rows_[x];
    auto it = std::lower_bound(r.begin(), r.end(), y, [](const Entry& e, VertexIndex t) { return e.target < t; });
    bool present = it != r.end() && it->target == y;
    if (value == 0.0) {
        if (present) r.erase(it);
    } else if (present) {
        it->weight = value;
    } else {
        r.insert(it, {y, value});
    }
}

double StructureFunction::row_sum(VertexIndex x) const {
    double sum = 0.0;
    for (const Entry& e : rows_[x]) sum += e.weight;
    return sum;
}

std::size_t StructureFunction::nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

StructureFunction diamond(const StructureFunction& f, const StructureFunction& g) {
    if (f.size() != g.size()) throw InputError("diamond: size mismatch");
    const std::size_t n = f.size();
    StructureFunction out(n);
    // Sparse accumulator per output row.
    std::vector<double> acc(n, 0.0);
    std::vector<char> used(n, 0);
    std::vector<VertexIndex> touched;
    for (VertexIndex x = 0; x < n; ++x) {
        touched.clear();
        for (const Entry& fz : f.rows_[x]) {
            for (const Entry& gy : g.rows_[fz.target]) {
                if (!used[gy.target]) {
                    used[gy.target] = 1;
                    touched.push_back(gy.target);
                }
                acc[gy.target] += fz.weight * gy.weight;
            }
        }
        std::sort(touched.begin(), touched.end());
        auto& row = out.rows_[x];
        for (VertexIndex y : touched) {
            if (acc[y] != 0.0) row.push_back({y, acc[y]});
            acc[y] = 0.0;
            used[y] = 0;
        }
    }
    return out;
}

StructureFunction diamond_power(const WeightedGraph& graph, unsigned k) {
    StructureFunction result = StructureFunction::identity(graph.size());
    const StructureFunction lambda = StructureFunction::from_graph(graph);
    for (unsigned i = 0; i < k; ++i) result = diamond(result, lambda);
    return result;
}

}  // namespace gpot
