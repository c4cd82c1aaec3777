#include "gpot/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

#include "gpot/error.hpp"
#include "gpot/format.hpp"

namespace gpot {

namespace {

constexpr const char* kNoSlices = "slices not disjoint or not separating";

// Undirected reachability inside the ball from sources, never entering blocked
// vertices or vertices rejected by allow.
template <class Allow>
std::vector<char> reach(const Ball& ball, const std::vector<VertexIndex>& sources, const std::vector<char>& blocked,
                        Allow allow) {
    std::vector<char> seen(ball.size(), 0);
    std::deque<VertexIndex> queue;
    for (VertexIndex s : sources) {
        if (!blocked[s] && allow(s) && !seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        for (VertexIndex u : ball.neighbors(v)) {
            if (!seen[u] && !blocked[u] && allow(u)) {
                seen[u] = 1;
                queue.push_back(u);
            }
        }
    }
    return seen;
}

std::vector<char> reach(const Ball& ball, const std::vector<VertexIndex>& sources, const std::vector<char>& blocked) {
    return reach(ball, sources, blocked, [](VertexIndex) { return true; });
}

// Vertices of the end's outermost component on the enclosing shell.
std::vector<VertexIndex> end_shell(const Truncation& t, EndId end) {
    std::vector<VertexIndex> out;
    for (VertexIndex v : t.ends.levels.back().components[to_index(end)])
        if (t.distance(v) == t.radius) out.push_back(v);
    return out;
}

bool separates(const Truncation& t, const std::vector<VertexIndex>& shell, const std::vector<VertexIndex>& path) {
    const Ball& ball = *t.ends.ball;
    std::vector<char> blocked(ball.size(), 0);
    for (VertexIndex v : path) blocked[v] = 1;
    if (blocked[0]) return false;
    auto seen = reach(ball, {0}, blocked);
    return std::none_of(shell.begin(), shell.end(), [&](VertexIndex v) { return seen[v] != 0; });
}

std::optional<Slice> find_slice(const Truncation& t, EndId end, int r, const std::vector<char>& taken) {
    const Ball& ball = *t.ends.ball;
    const auto shell = end_shell(t, end);
    const std::vector<char> none(ball.size(), 0);
    auto region = reach(ball, shell, none, [&](VertexIndex v) { return ball.distance[v] >= r; });
    auto in_band = [&](VertexIndex v) {
        return region[v] && !taken[v] && (ball.distance[v] == r || ball.distance[v] == r + 1);
    };

    std::vector<VertexIndex> candidates;
    for (VertexIndex v = 0; v < ball.size(); ++v)
        if (in_band(v) && ball.absorbing[v]) candidates.push_back(v);
    candidates = sorted_by_id(t.window, std::move(candidates));

    for (VertexIndex a : candidates) {
        std::vector<std::int64_t> parent(ball.size(), -2);
        std::deque<VertexIndex> queue{a};
        parent[a] = -1;
        while (!queue.empty()) {
            VertexIndex v = queue.front();
            queue.pop_front();
            for (VertexIndex u : ball.neighbors(v)) {
                if (parent[u] == -2 && in_band(u)) {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        for (VertexIndex b : candidates) {
            if (b == a || parent[b] == -2) continue;
            Slice slice;
            slice.radius = r;
            for (std::int64_t v = b; v != -1; v = parent[static_cast<VertexIndex>(v)])
                slice.vertices.push_back(static_cast<VertexIndex>(v));
            std::reverse(slice.vertices.begin(), slice.vertices.end());
            if (separates(t, shell, slice.vertices)) return slice;
        }
    }
    return std::nullopt;
}

Subdomain make_subdomain(const Truncation& t, const std::vector<char>& core, std::optional<EndId> owns_end) {
    const WeightedGraph& w = t.window;
    std::vector<char> member(core);
    for (VertexIndex v = 0; v < w.size(); ++v)
        if (core[v])
            for (const Entry& e : w.row(v)) member[e.target] = 1;

    Subdomain sub;
    sub.owns_end = owns_end;
    std::vector<VertexIndex> local(w.size(), kOutside);
    GraphBuilder builder;
    for (VertexIndex v = 0; v < w.size(); ++v) {
        if (!member[v]) continue;
        local[v] = builder.add_vertex(w.name(v));
        sub.to_window.push_back(v);
        sub.in_core.push_back(core[v]);
    }
    for (VertexIndex lv = 0; lv < sub.to_window.size(); ++lv) {
        const VertexIndex v = sub.to_window[lv];
        if (core[v] || w.is_boundary(v)) {
            for (const Entry& e : w.row(v)) builder.add_edge(lv, local[e.target], e.weight);
        } else {
            builder.add_edge(lv, lv, 1.0);
            sub.interface.push_back(lv);
        }
        if (auto it = t.end_of_frontier.find(v); it != t.end_of_frontier.end()) sub.end_map.emplace(lv, it->second);
    }
    sub.graph = std::move(builder).build();
    sub.interface = sorted_by_id(sub.graph, std::move(sub.interface));
    return sub;
}

}  // namespace

std::vector<SlicePair> choose_slices(const Truncation& t, int r_in, int r_out) {
    if (!t.ends.stable) throw DomainError("unstable ends: " + t.ends.note + "; enlarge the radius");
    if (t.ends.end_count() == 0) throw DomainError("no ends found in the window");
    if (r_in < 1) throw InputError("r_in must be at least 1");
    if (r_out - r_in < 2 || r_out + 1 >= t.radius)
        throw DomainError(std::string(kNoSlices) + " (need r_in + 2 <= r_out and r_out + 1 < radius)");

    const Ball& ball = *t.ends.ball;
    std::vector<char> taken(ball.size(), 0);
    std::vector<SlicePair> out;
    for (EndId end : t.ends.ends) {
        SlicePair pair;
        pair.end = end;
        auto inside = find_slice(t, end, r_in, taken);
        if (!inside) throw DomainError(std::string(kNoSlices) + " (end " + std::to_string(to_index(end)) + ", r_in)");
        for (VertexIndex v : inside->vertices) taken[v] = 1;
        auto outside = find_slice(t, end, r_out, taken);
        if (!outside) throw DomainError(std::string(kNoSlices) + " (end " + std::to_string(to_index(end)) + ", r_out)");
        for (VertexIndex v : outside->vertices) taken[v] = 1;

        std::vector<char> blocked(ball.size(), 0);
        for (VertexIndex v : inside->vertices) blocked[v] = 1;
        auto end_side = reach(ball, end_shell(t, end), blocked);
        for (VertexIndex v : outside->vertices)
            if (!end_side[v]) throw DomainError(std::string(kNoSlices) + " (outside slice is not beyond the inside one)");
        pair.inside = std::move(*inside);
        pair.outside = std::move(*outside);
        out.push_back(std::move(pair));
    }
    return out;
}

std::vector<Subdomain> build_subdomains(const Truncation& t, const std::vector<SlicePair>& slices) {
    const Ball& ball = *t.ends.ball;
    const std::size_t n = ball.size();
    std::vector<Subdomain> subs;
    std::vector<char> outside_blocked(n, 0);
    for (const auto& pair : slices) {
        std::vector<char> blocked(n, 0);
        for (VertexIndex v : pair.inside.vertices) blocked[v] = 1;
        for (VertexIndex v : pair.outside.vertices) outside_blocked[v] = 1;
        auto core = reach(ball, end_shell(t, pair.end), blocked);
        if (core[0]) throw DomainError(std::string(kNoSlices) + " (inside slice leaves the base on the end side)");
        subs.push_back(make_subdomain(t, core, pair.end));
    }
    auto core = reach(ball, {0}, outside_blocked);
    for (const auto& pair : slices)
        for (VertexIndex v : end_shell(t, pair.end))
            if (core[v]) throw DomainError(std::string(kNoSlices) + " (outside slices leave an end attached)");
    bool has_interior = false;
    for (VertexIndex v = 0; v < n; ++v)
        if (core[v] && !t.window.is_boundary(v)) has_interior = true;
    if (!has_interior) throw DomainError("r_out too small: the endless subdomain has no interior");
    subs.push_back(make_subdomain(t, core, std::nullopt));

    // End subdomains are disjoint, each overlaps the endless one, and every
    // interface vertex lies in the core of the subdomain on the other side.
    const Subdomain& endless = subs.back();
    std::vector<char> in_endless(n, 0), in_endless_core(n, 0), in_end_core(n, 0), owner(n, 0);
    for (VertexIndex lv = 0; lv < endless.to_window.size(); ++lv) {
        in_endless[endless.to_window[lv]] = 1;
        in_endless_core[endless.to_window[lv]] = endless.in_core[lv];
    }
    for (std::size_t i = 0; i + 1 < subs.size(); ++i) {
        bool overlaps = false;
        for (VertexIndex lv = 0; lv < subs[i].to_window.size(); ++lv) {
            const VertexIndex v = subs[i].to_window[lv];
            if (owner[v]) throw DomainError(std::string(kNoSlices) + " (end subdomains overlap)");
            owner[v] = 1;
            if (subs[i].in_core[lv]) in_end_core[v] = 1;
            overlaps = overlaps || in_endless[v];
        }
        if (!overlaps) throw DomainError("end subdomain " + std::to_string(i) + " does not overlap the endless one");
        for (VertexIndex lv : subs[i].interface)
            if (!in_endless_core[subs[i].to_window[lv]])
                throw DomainError("interface vertex " + subs[i].graph.name(lv) + " is not interior to the endless subdomain");
    }
    for (VertexIndex lv : endless.interface)
        if (!in_end_core[endless.to_window[lv]])
            throw DomainError("interface vertex " + endless.graph.name(lv) + " is not interior to an end subdomain");
    return subs;
}

void write_trace_csv(std::ostream& out, const AlternationTrace& trace) {
    out << "sweep,subdomain,max_delta\n";
    for (const auto& row : trace.rows) out << row.sweep << ',' << row.subdomain << ',' << format_real(row.max_delta) << '\n';
}

SchwarzResult schwarz_solve(const LazyGraph& graph, const BoundaryData& data, const SchwarzParams& params) {
    if (!(params.tol > 0.0)) throw InputError("tolerance must be positive");
    if (params.max_sweeps < 1) throw InputError("max_sweeps must be at least 1");

    SchwarzResult result;
    result.truncation = truncate(graph, params.radius);
    const Truncation& t = result.truncation;
    const WeightedGraph& w = t.window;
    if (!t.ends.stable) throw DomainError("unstable ends: " + t.ends.note + "; enlarge the radius");
    auto continuity = check_continuity_at_infinity(data, t.ends, params.continuity_epsilons);
    if (!continuity.continuous()) throw DomainError("not continuous at infinity:\n" + continuity.to_text());

    result.slices = choose_slices(t, params.r_in, params.r_out);
    result.subdomains = build_subdomains(t, result.slices);
    const auto& subs = result.subdomains;
    const std::size_t count = subs.size();
    const std::size_t core_index = count - 1;

    const auto pinned = pinned_values(w, data, t.end_of_frontier);
    double sup_data = -std::numeric_limits<double>::infinity();
    double min_data = std::numeric_limits<double>::infinity();
    for (const auto& [v, value] : pinned) {
        sup_data = std::max(sup_data, value);
        min_data = std::min(min_data, value);
    }

    // Window index -> (subdomain, local index) for interface lookups.
    std::vector<std::vector<std::int64_t>> local(count, std::vector<std::int64_t>(w.size(), -1));
    for (std::size_t i = 0; i < count; ++i)
        for (VertexIndex lv = 0; lv < subs[i].to_window.size(); ++lv) local[i][subs[i].to_window[lv]] = lv;
    std::vector<std::int64_t> end_core_owner(w.size(), -1);
    for (std::size_t i = 0; i < core_index; ++i)
        for (VertexIndex lv = 0; lv < subs[i].to_window.size(); ++lv)
            if (subs[i].in_core[lv]) end_core_owner[subs[i].to_window[lv]] = static_cast<std::int64_t>(i);

    const double sub_tol = params.tol / 10.0;
    bool any_iterative = false;
    auto solve = [&](const Subdomain& sub, const std::map<VertexIndex, double>& values) {
        if (sub.graph.size() <= params.direct_limit) return solve_direct(sub.graph, values).values;
        any_iterative = true;
        IterativeOptions it;
        it.tol = sub_tol;
        return solve_iterative(sub.graph, values, it).values;
    };

    std::vector<VertexFunction> current(count), previous(count);
    for (std::size_t i = 0; i < count; ++i) previous[i] = VertexFunction(subs[i].graph.size(), sup_data);
    const double base_slack = 1e-12 * std::max({1.0, std::abs(sup_data), std::abs(min_data)});

    auto check_chain = [&](const char* what, const VertexFunction& upper, std::size_t ui, const VertexFunction& lower,
                           std::size_t li, double slack) {
        for (VertexIndex lv = 0; lv < subs[li].to_window.size(); ++lv) {
            const std::int64_t u = local[ui][subs[li].to_window[lv]];
            if (u < 0) continue;
            if (lower[lv] > upper[static_cast<VertexIndex>(u)] + slack)
                throw std::logic_error(std::string("alternating chain broken (") + what + ") at " +
                                       subs[li].graph.name(lv));
        }
    };

    std::size_t sweep = 0;
    double sweep_delta = std::numeric_limits<double>::infinity();
    while (true) {
        if (sweep == params.max_sweeps)
            throw DomainError("no convergence after " + std::to_string(sweep) + " sweeps (last delta " +
                              format_real(sweep_delta) + ")");
        ++sweep;

        for (std::size_t i = 0; i < core_index; ++i) {
            std::map<VertexIndex, double> values;
            for (VertexIndex lv : kiselman_boundary(subs[i].graph)) {
                const VertexIndex v = subs[i].to_window[lv];
                if (!w.is_boundary(v)) {
                    values[lv] = sweep == 1 ? sup_data : previous[core_index][static_cast<VertexIndex>(local[core_index][v])];
                } else {
                    values[lv] = pinned.at(v);
                }
            }
            current[i] = solve(subs[i], values);
        }
        {
            const Subdomain& core = subs[core_index];
            std::map<VertexIndex, double> values;
            for (VertexIndex lv : kiselman_boundary(core.graph)) {
                const VertexIndex v = core.to_window[lv];
                if (!w.is_boundary(v)) {
                    const std::int64_t owner = end_core_owner[v];
                    values[lv] = current[static_cast<std::size_t>(owner)][static_cast<VertexIndex>(local[owner][v])];
                } else {
                    values[lv] = pinned.at(v);
                }
            }
            current[core_index] = solve(core, values);
        }

        // Iterative subdomain solves are only accurate to their tolerance.
        const double chain_slack = base_slack + (any_iterative ? 2.0 * sub_tol : 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            for (double value : current[i].values())
                if (value < min_data - chain_slack) throw std::logic_error("alternating iterate fell below the data minimum");
            if (sweep > 1) check_chain("sweep to sweep", previous[i], i, current[i], i, chain_slack);
        }
        for (std::size_t i = 0; i < core_index; ++i) {
            check_chain("end to endless", current[i], i, current[core_index], core_index, chain_slack);
            if (sweep > 1) check_chain("endless to next end", previous[core_index], core_index, current[i], i, chain_slack);
        }

        sweep_delta = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double d = max_abs_difference(current[i], previous[i]);
            result.trace.rows.push_back({sweep, i, d});
            sweep_delta = std::max(sweep_delta, d);
        }
        if (params.keep_snapshots) result.trace.snapshots.push_back(current);
        std::swap(current, previous);
        if (sweep > 1 && sweep_delta <= params.tol) break;
    }

    Solution sol;
    sol.method = SolveMethod::schwarz;
    sol.values = VertexFunction(w.size(), 0.0);
    std::vector<char> assigned(w.size(), 0);
    for (std::size_t i = count; i-- > 0;) {
        for (VertexIndex lv = 0; lv < subs[i].to_window.size(); ++lv) {
            const VertexIndex v = subs[i].to_window[lv];
            if (!subs[i].in_core[lv] || assigned[v]) continue;
            sol.values[v] = previous[i][lv];
            assigned[v] = 1;
        }
    }
    for (const auto& [v, value] : pinned) {
        sol.values[v] = value;
        assigned[v] = 1;
    }
    for (VertexIndex v = 0; v < w.size(); ++v)
        if (!assigned[v]) throw std::logic_error("vertex " + w.name(v) + " is not covered by any subdomain");
    sol.iterations = sweep;
    sol.residual = interior_residual(w, sol.values);
    if (sol.residual > 10.0 * params.tol)
        throw DomainError("schwarz solution residual " + format_real(sol.residual) + " exceeds 10*tol");
    sol.metadata.emplace_back("sweeps", std::to_string(sweep));
    sol.metadata.emplace_back("r_in", std::to_string(params.r_in));
    sol.metadata.emplace_back("r_out", std::to_string(params.r_out));
    sol.metadata.emplace_back("last_delta", format_real(sweep_delta));
    result.solution = std::move(sol);
    return result;
}

}  // namespace gpot
