#include "gpot/ends.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "gpot/error.hpp"
#include "gpot/format.hpp"

namespace gpot {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

    VertexIndex find(VertexIndex v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    void unite(VertexIndex a, VertexIndex b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<VertexIndex> parent_;
};

}  // namespace

LazyGraph::LazyGraph(std::string base, RowFn row, AdjacencyFn adjacent, std::string description)
    : base_(std::move(base)), row_(std::move(row)), adjacent_(std::move(adjacent)), description_(std::move(description)) {
    if (!row_) throw InputError("lazy graph needs a row procedure");
}

std::vector<std::string> LazyGraph::adjacent(const std::string& v) const {
    if (adjacent_) return adjacent_(v);
    std::vector<std::string> out;
    for (auto& n : row_(v))
        if (n.id != v) out.push_back(std::move(n.id));
    return out;
}

LazyGraph LazyGraph::from_graph(WeightedGraph graph, std::string base) {
    auto g = std::make_shared<const WeightedGraph>(std::move(graph));
    g->at(base);
    auto reverse = std::make_shared<std::vector<std::vector<VertexIndex>>>(g->size());
    for (VertexIndex v = 0; v < g->size(); ++v)
        for (const Entry& e : g->row(v))
            if (e.target != v) (*reverse)[e.target].push_back(v);
    auto row = [g](const std::string& id) {
        std::vector<LazyNeighbor> out;
        for (const Entry& e : g->row(g->at(id))) out.push_back({g->name(e.target), e.weight});
        return out;
    };
    auto adjacent = [g, reverse](const std::string& id) {
        VertexIndex v = g->at(id);
        std::vector<VertexIndex> idx;
        for (const Entry& e : g->row(v))
            if (e.target != v) idx.push_back(e.target);
        idx.insert(idx.end(), (*reverse)[v].begin(), (*reverse)[v].end());
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        std::vector<std::string> out;
        for (VertexIndex u : idx) out.push_back(g->name(u));
        return out;
    };
    return LazyGraph(std::move(base), row, adjacent, "file");
}

std::optional<VertexIndex> Ball::find(const std::string& id) const {
    auto it = index.find(id);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

std::shared_ptr<const Ball> explore_ball(const LazyGraph& graph, int radius) {
    if (radius < 0) throw InputError("radius must be non-negative");
    auto ball = std::make_shared<Ball>();
    ball->radius = radius;

    auto add = [&ball](const std::string& id, int dist) {
        auto [it, inserted] = ball->index.try_emplace(id, static_cast<VertexIndex>(ball->names.size()));
        if (inserted) {
            ball->names.push_back(id);
            ball->distance.push_back(dist);
        }
        return it->second;
    };

    std::vector<std::pair<VertexIndex, VertexIndex>> links;
    add(graph.base(), 0);
    for (VertexIndex v = 0; v < ball->names.size(); ++v) {
        // names grows while we scan: this is the BFS queue.
        const int d = ball->distance[v];
        const std::string name = ball->names[v];
        if (d < radius) {
            for (const auto& a : graph.adjacent(name)) links.emplace_back(v, add(a, d + 1));
        } else {
            for (const auto& a : graph.adjacent(name))
                if (auto u = ball->find(a)) links.emplace_back(v, *u);
        }
    }

    const std::size_t n = ball->names.size();
    std::vector<std::pair<VertexIndex, VertexIndex>> sym;
    sym.reserve(links.size() * 2);
    for (auto [a, b] : links) {
        if (a == b) continue;
        sym.emplace_back(a, b);
        sym.emplace_back(b, a);
    }
    links.clear();
    links.shrink_to_fit();
    std::sort(sym.begin(), sym.end());
    sym.erase(std::unique(sym.begin(), sym.end()), sym.end());
    ball->adjacency_offsets.assign(n + 1, 0);
    for (auto [a, b] : sym) ++ball->adjacency_offsets[a + 1];
    for (std::size_t i = 0; i < n; ++i) ball->adjacency_offsets[i + 1] += ball->adjacency_offsets[i];
    ball->adjacency.reserve(sym.size());
    for (auto [a, b] : sym) ball->adjacency.push_back(b);

    ball->absorbing.assign(n, 0);
    ball->row_offsets.reserve(n + 1);
    for (VertexIndex v = 0; v < n; ++v) {
        const auto lazy = graph.row(ball->names[v]);
        std::vector<Entry> row;
        double sum = 0.0;
        bool bad = false;
        for (const auto& nb : lazy) {
            if (!std::isfinite(nb.weight) || nb.weight < 0.0) bad = true;
            sum += nb.weight;
            if (nb.weight == 0.0) continue;
            auto t = ball->find(nb.id);
            row.push_back({t ? *t : kOutside, nb.weight});
            if (t && *t == v && nb.weight >= 1.0 - kWeightTolerance) ball->absorbing[v] = 1;
        }
        if (bad || std::abs(sum - 1.0) > kWeightTolerance)
            throw InputError("invalid lazy row at " + ball->names[v] + " (row sum " + format_real(sum) + ")");
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.target < b.target; });
        for (std::size_t i = 1; i < row.size(); ++i)
            if (row[i].target == row[i - 1].target && row[i].target != kOutside)
                throw InputError("invalid lazy row at " + ball->names[v] + " (duplicate neighbor)");
        ball->rows.insert(ball->rows.end(), row.begin(), row.end());
        ball->row_offsets.push_back(ball->rows.size());
    }
    return ball;
}

std::optional<EndId> EndDecomposition::end_of(VertexIndex v) const {
    if (levels.empty() || v >= membership_.back().size()) return std::nullopt;
    std::int32_t c = membership_.back()[v];
    if (c < 0) return std::nullopt;
    return EndId{static_cast<std::uint32_t>(c)};
}

std::optional<std::size_t> EndDecomposition::component_at(std::size_t level, VertexIndex v) const {
    std::int32_t c = membership_.at(level).at(v);
    if (c < 0) return std::nullopt;
    return static_cast<std::size_t>(c);
}

std::size_t EndDecomposition::shell_size(EndId end) const {
    const auto& comp = levels.back().components.at(to_index(end));
    return static_cast<std::size_t>(std::count_if(comp.begin(), comp.end(), [this](VertexIndex v) {
        return ball->distance[v] == enclosing_radius();
    }));
}

std::string EndDecomposition::to_text() const {
    std::string out;
    for (EndId e : ends)
        out += "end " + std::to_string(to_index(e)) + " frontier-size " + std::to_string(shell_size(e)) + "\n";
    return out;
}

std::vector<int> default_radii(int radius) {
    // Probes stay two steps inside the shell: a probe at R - 1 leaves only the
    // shell itself, which falls apart into single vertices on lattices.
    const int cap = std::max(0, radius - 2);
    std::vector<int> r{std::min(radius / 2, cap), std::min(2 * radius / 3, cap), std::min(5 * radius / 6, cap)};
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    r.push_back(radius);
    return r;
}

EndDecomposition decompose(std::shared_ptr<const Ball> ball, std::vector<int> radii) {
    if (radii.size() < 2) throw InputError("end detection needs a probe radius and an enclosing radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 0 || (i > 0 && radii[i] <= radii[i - 1]))
            throw InputError("probe radii must be non-negative and strictly increasing");
    }
    if (radii.back() > ball->radius) throw InputError("enclosing radius exceeds the explored ball");

    EndDecomposition out;
    out.ball = ball;
    out.radii = radii;
    const int enclosing = radii.back();
    const std::size_t n = ball->size();

    for (std::size_t li = 0; li + 1 < radii.size(); ++li) {
        const int r = radii[li];
        auto outside = [&](VertexIndex v) { return ball->distance[v] > r && ball->distance[v] <= enclosing; };
        DisjointSets sets(n);
        for (VertexIndex v = 0; v < n; ++v) {
            if (!outside(v)) continue;
            for (VertexIndex u : ball->neighbors(v))
                if (outside(u)) sets.unite(v, u);
        }
        std::vector<char> reaches(n, 0);
        for (VertexIndex v = 0; v < n; ++v)
            if (outside(v) && ball->distance[v] == enclosing) reaches[sets.find(v)] = 1;

        std::unordered_map<VertexIndex, std::size_t> slot;
        std::vector<std::vector<VertexIndex>> comps;
        for (VertexIndex v = 0; v < n; ++v) {
            if (!outside(v)) continue;
            VertexIndex root = sets.find(v);
            if (!reaches[root]) continue;
            auto [it, inserted] = slot.try_emplace(root, comps.size());
            if (inserted) comps.emplace_back();
            comps[it->second].push_back(v);
        }
        std::vector<std::size_t> order(comps.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<const std::string*> least(comps.size());
        for (std::size_t c = 0; c < comps.size(); ++c) {
            least[c] = &ball->names[comps[c].front()];
            for (VertexIndex v : comps[c])
                if (ball->names[v] < *least[c]) least[c] = &ball->names[v];
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return *least[a] < *least[b]; });

        ProbeLevel level;
        level.radius = r;
        std::vector<std::int32_t> membership(n, -1);
        for (std::size_t k = 0; k < order.size(); ++k) {
            for (VertexIndex v : comps[order[k]]) membership[v] = static_cast<std::int32_t>(k);
            level.components.push_back(std::move(comps[order[k]]));
        }
        if (li > 0) {
            const auto& below = out.membership_.back();
            for (const auto& comp : level.components) {
                std::int32_t p = below[comp.front()];
                if (p < 0) throw std::logic_error("end component lost its parent thread");
                level.parent.push_back(static_cast<std::size_t>(p));
            }
        }
        out.levels.push_back(std::move(level));
        out.membership_.push_back(std::move(membership));
    }

    const auto& top = out.levels.back();
    for (std::size_t k = 0; k < top.components.size(); ++k) out.ends.push_back(EndId{static_cast<std::uint32_t>(k)});

    if (out.levels.size() < 2) {
        out.note = "fewer than two probe radii";
    } else {
        const auto& prev = out.levels[out.levels.size() - 2];
        std::vector<std::size_t> parents = top.parent;
        std::sort(parents.begin(), parents.end());
        bool bijective = top.components.size() == prev.components.size() &&
                         std::adjacent_find(parents.begin(), parents.end()) == parents.end();
        if (bijective) {
            out.stable = true;
        } else {
            out.note = "component count changes from " + std::to_string(prev.components.size()) + " to " +
                       std::to_string(top.components.size()) + " between radii " + std::to_string(prev.radius) +
                       " and " + std::to_string(top.radius);
        }
    }
    return out;
}

EndDecomposition detect_ends(const LazyGraph& graph, std::vector<int> radii) {
    if (radii.size() < 3) throw InputError("end detection needs at least three radii");
    auto ball = explore_ball(graph, radii.back());
    return decompose(std::move(ball), std::move(radii));
}

Truncation truncate(EndDecomposition ends) {
    const auto ball = ends.ball;
    const int radius = ball->radius;
    if (radius < 1) throw InputError("truncation radius must be at least 1");
    if (ends.enclosing_radius() != radius) throw InputError("decomposition must enclose the whole ball");
    Truncation t;
    t.radius = radius;
    t.ends = std::move(ends);

    GraphBuilder builder;
    for (const auto& name : ball->names) builder.add_vertex(name);
    for (VertexIndex v = 0; v < ball->size(); ++v) {
        auto row = ball->row(v);
        bool leaves = std::any_of(row.begin(), row.end(), [](const Entry& e) { return e.target == kOutside; });
        if (leaves) {
            if (ball->distance[v] < radius) throw InputError("lazy adjacency inconsistent at " + ball->names[v]);
            builder.add_edge(v, v, 1.0);
            t.frontier.push_back(v);
            auto end = t.ends.end_of(v);
            if (!end) throw std::logic_error("frontier vertex without an end");
            t.end_of_frontier.emplace(v, *end);
        } else {
            for (const Entry& e : row) builder.add_edge(v, e.target, e.weight);
        }
    }
    t.window = std::move(builder).build();
    t.frontier = sorted_by_id(t.window, std::move(t.frontier));
    return t;
}

Truncation truncate(const LazyGraph& graph, int radius) {
    if (radius < 1) throw InputError("truncation radius must be at least 1");
    return truncate(decompose(explore_ball(graph, radius), default_radii(radius)));
}

SequenceClass classify_sequence(const EndDecomposition& d, std::span<const std::string> sequence) {
    const Ball& ball = *d.ball;
    std::vector<VertexIndex> seq;
    for (const auto& id : sequence) {
        auto v = ball.find(id);
        if (!v) throw DomainError("needs larger radii: " + id + " lies outside the explored ball");
        seq.push_back(*v);
    }
    if (seq.size() < 2 || seq[seq.size() - 1] == seq[seq.size() - 2]) return {};

    std::optional<std::size_t> previous;
    for (std::size_t li = 0; li < d.levels.size(); ++li) {
        const int r = d.levels[li].radius;
        std::size_t start = 0;
        for (std::size_t i = 0; i < seq.size(); ++i)
            if (ball.distance[seq[i]] <= r) start = i + 1;
        if (start >= seq.size()) return {};
        std::optional<std::size_t> comp;
        for (std::size_t i = start; i < seq.size(); ++i) {
            auto c = d.component_at(li, seq[i]);
            if (!c || (comp && *c != *comp)) return {};
            comp = c;
        }
        if (previous && d.levels[li].parent[*comp] != *previous) return {};
        previous = comp;
    }
    if (!previous) return {};
    return {true, EndId{static_cast<std::uint32_t>(*previous)}};
}

bool ContinuityReport::continuous() const {
    return std::all_of(items.begin(), items.end(), [](const ContinuityItem& i) { return i.continuous; });
}

std::string ContinuityReport::to_text() const {
    std::string out;
    for (const auto& i : items) {
        out += "continuity end " + std::to_string(to_index(i.end)) + " epsilon " + format_real(i.epsilon) + " " +
               (i.continuous ? "ok" : "violated") + " violators " + std::to_string(i.violators) + " shell " +
               std::to_string(i.shell_violators) + " max-distance " + std::to_string(i.max_violator_distance) + "\n";
    }
    return out;
}

ContinuityReport check_continuity_at_infinity(const BoundaryData& data, const EndDecomposition& d,
                                              std::span<const double> epsilons) {
    ContinuityReport report;
    const Ball& ball = *d.ball;
    for (double eps : epsilons) {
        for (EndId e : d.ends) {
            const double fe = data.end_value(e);
            ContinuityItem item;
            item.epsilon = eps;
            item.end = e;
            for (VertexIndex v : d.levels.back().components[to_index(e)]) {
                if (!ball.absorbing[v]) continue;
                if (std::abs(data.value_at(ball.names[v]) - fe) <= eps) continue;
                ++item.violators;
                item.max_violator_distance = std::max(item.max_violator_distance, ball.distance[v]);
                if (ball.distance[v] == d.enclosing_radius()) ++item.shell_violators;
            }
            item.continuous = item.shell_violators == 0;
            report.items.push_back(item);
        }
    }
    return report;
}

}  // namespace gpot
