#include "gpot/dirichlet.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>

#include "gpot/error.hpp"
#include "gpot/format.hpp"
#include "gpot/parallel.hpp"

namespace gpot {

namespace {

void require_boundary_attached(const WeightedGraph& g) {
    if (!is_boundary_connected(g)) throw DomainError("interior component with no boundary attachment");
}

void require_pinned(const WeightedGraph& g, const std::map<VertexIndex, double>& pinned) {
    std::size_t count = 0;
    for (const auto& [v, value] : pinned) {
        if (v >= g.size() || !g.is_boundary(v)) throw InputError("pinned vertex is not a boundary point");
        if (!std::isfinite(value)) throw InputError("boundary value at " + g.name(v) + " is not finite");
        ++count;
    }
    if (count != kiselman_boundary(g).size()) throw InputError("every boundary point needs a value");
}

void check_admissible(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& f, const char* half) {
    if (u.size() != g.size()) throw InputError(std::string("initial guess for f") + half + " has the wrong size");
    for (VertexIndex v = 0; v < g.size(); ++v) {
        if (!std::isfinite(u[v])) throw InputError(std::string("initial guess for f") + half + " is not finite");
        if (g.is_boundary(v) && u[v] != f[v])
            throw InputError(std::string("initial guess for f") + half + " differs from the data at " + g.name(v));
    }
    if (!is_subharmonic(g, u, 1e-12))
        throw InputError(std::string("initial guess for f") + half + " is not subharmonic");
}

double interior_min(const WeightedGraph& g, const VertexFunction& u) {
    double m = 0.0;
    for (VertexIndex v = 0; v < g.size(); ++v)
        if (!g.is_boundary(v)) m = std::min(m, u[v]);
    return m;
}

struct SweepStats {
    double increment_plus = 0.0;
    double increment_minus = 0.0;
    double survival = 0.0;
    double worst_decrease = 0.0;
};

// One synchronous averaging step on both halves plus the survival vector.
SweepStats sweep(const WeightedGraph& g, const VertexFunction& up, const VertexFunction& um,
                 const std::vector<double>& s, VertexFunction& next_up, VertexFunction& next_um,
                 std::vector<double>& next_s) {
    SweepStats total;
    std::mutex lock;
    parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
        SweepStats local;
        for (std::size_t i = begin; i < end; ++i) {
            const auto x = static_cast<VertexIndex>(i);
            if (g.is_boundary(x)) {
                next_up[x] = up[x];
                next_um[x] = um[x];
                next_s[x] = 0.0;
                continue;
            }
            double a = 0.0, b = 0.0, c = 0.0;
            for (const Entry& e : g.row(x)) {
                a += e.weight * up[e.target];
                b += e.weight * um[e.target];
                c += e.weight * s[e.target];
            }
            next_up[x] = a;
            next_um[x] = b;
            next_s[x] = c;
            local.increment_plus = std::max(local.increment_plus, a - up[x]);
            local.increment_minus = std::max(local.increment_minus, b - um[x]);
            local.worst_decrease = std::max({local.worst_decrease, up[x] - a, um[x] - b});
            local.survival = std::max(local.survival, c);
        }
        std::lock_guard guard(lock);
        total.increment_plus = std::max(total.increment_plus, local.increment_plus);
        total.increment_minus = std::max(total.increment_minus, local.increment_minus);
        total.worst_decrease = std::max(total.worst_decrease, local.worst_decrease);
        total.survival = std::max(total.survival, local.survival);
    });
    return total;
}

void add_warning_if_not_quasi_reversible(const WeightedGraph& g, Solution& s) {
    auto qr = quasi_reversibility(g);
    if (!qr.holds) {
        const auto& [x, y] = qr.violations.front();
        s.warnings.push_back("not quasi-reversible (edge " + g.name(x) + " -> " + g.name(y) +
                             " is not reciprocated); uniqueness is not guaranteed");
    }
}

}  // namespace

std::string_view to_string(SolveMethod method) {
    switch (method) {
        case SolveMethod::iterative: return "iterative";
        case SolveMethod::direct: return "direct";
        case SolveMethod::schwarz: return "schwarz";
        case SolveMethod::montecarlo: return "montecarlo";
    }
    return "unknown";
}

std::map<VertexIndex, double> pinned_values(const WeightedGraph& g, const BoundaryData& data, const EndMap& end_map) {
    std::map<VertexIndex, double> out;
    for (VertexIndex v : kiselman_boundary(g)) {
        auto it = end_map.find(v);
        double value = it != end_map.end() ? data.end_value(it->second) : data.value_at(g.name(v));
        if (!std::isfinite(value)) throw InputError("boundary value at " + g.name(v) + " is not finite");
        out.emplace(v, value);
    }
    for (const auto& [v, e] : end_map)
        if (v >= g.size() || !g.is_boundary(v)) throw InputError("end map names a vertex that is not a boundary point");
    return out;
}

Solution solve_iterative(const WeightedGraph& g, const BoundaryData& data, const EndMap& end_map,
                         const IterativeOptions& options) {
    return solve_iterative(g, pinned_values(g, data, end_map), options);
}

Solution solve_iterative(const WeightedGraph& g, const std::map<VertexIndex, double>& pinned,
                         const IterativeOptions& options) {
    if (!(options.tol > 0.0) || !std::isfinite(options.tol)) throw InputError("tolerance must be positive");
    require_pinned(g, pinned);
    require_boundary_attached(g);

    Solution sol;
    sol.method = SolveMethod::iterative;
    add_warning_if_not_quasi_reversible(g, sol);

    std::map<VertexIndex, double> fplus, fminus;
    double max_plus = 0.0, max_minus = 0.0;
    for (const auto& [v, value] : pinned) {
        fplus[v] = std::max(value, 0.0);
        fminus[v] = -std::min(value, 0.0);
        max_plus = std::max(max_plus, fplus[v]);
        max_minus = std::max(max_minus, fminus[v]);
    }
    VertexFunction up = extend_by_zero(g, fplus);
    VertexFunction um = extend_by_zero(g, fminus);
    if (options.initial) {
        check_admissible(g, options.initial->plus, up, "+");
        check_admissible(g, options.initial->minus, um, "-");
        up = options.initial->plus;
        um = options.initial->minus;
    }
    // Q^k(h - u_0) bounds the error, and h - u_0 <= sup f - min u_0 on the interior.
    const double bound_plus = max_plus - interior_min(g, up);
    const double bound_minus = max_minus - interior_min(g, um);

    std::vector<double> s(g.size());
    for (VertexIndex v = 0; v < g.size(); ++v) s[v] = g.is_boundary(v) ? 0.0 : 1.0;
    double survival = interior(g).empty() ? 0.0 : 1.0;

    VertexFunction next_up(g.size()), next_um(g.size());
    std::vector<double> next_s(g.size());
    const double half = options.tol / 2.0;
    double increment = std::numeric_limits<double>::infinity();
    std::size_t k = 0;
    while (true) {
        if (survival * bound_plus <= half && survival * bound_minus <= half && increment <= half) break;
        if (k == options.max_iter)
            throw DomainError("no convergence after " + std::to_string(k) + " sweeps (last increment " +
                              format_real(increment) + ")");
        SweepStats st = sweep(g, up, um, s, next_up, next_um, next_s);
        if (st.worst_decrease > 1e-12 * std::max({1.0, max_plus, max_minus}))
            throw std::logic_error("monotone iteration decreased by " + format_real(st.worst_decrease));
        std::swap(up, next_up);
        std::swap(um, next_um);
        std::swap(s, next_s);
        survival = st.survival;
        increment = std::max(st.increment_plus, st.increment_minus);
        ++k;
    }

    sol.values = VertexFunction(g.size());
    for (VertexIndex v = 0; v < g.size(); ++v) sol.values[v] = up[v] - um[v];
    for (const auto& [v, value] : pinned) sol.values[v] = value;
    sol.iterations = k;
    sol.residual = interior_residual(g, sol.values);
    if (sol.residual > options.tol * (1.0 + 1e-6))
        throw std::logic_error("iterative solution residual " + format_real(sol.residual) + " exceeds tol");
    return sol;
}

Solution solve_direct(const WeightedGraph& g, const BoundaryData& data, const EndMap& end_map) {
    return solve_direct(g, pinned_values(g, data, end_map));
}

Solution solve_direct(const WeightedGraph& g, const std::map<VertexIndex, double>& pinned) {
    require_pinned(g, pinned);
    require_boundary_attached(g);

    Solution sol;
    sol.method = SolveMethod::direct;
    add_warning_if_not_quasi_reversible(g, sol);

    const auto inner = interior(g);
    std::vector<std::int64_t> slot(g.size(), -1);
    for (std::size_t i = 0; i < inner.size(); ++i) slot[inner[i]] = static_cast<std::int64_t>(i);

    sol.values = VertexFunction(g.size());
    for (const auto& [v, value] : pinned) sol.values[v] = value;

    if (!inner.empty()) {
        const auto n = static_cast<Eigen::Index>(inner.size());
        std::vector<Eigen::Triplet<double>> triplets;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < inner.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            double diagonal = 1.0;
            for (const Entry& e : g.row(inner[i])) {
                if (slot[e.target] < 0) {
                    rhs[row] += e.weight * sol.values[e.target];
                } else if (e.target == inner[i]) {
                    diagonal -= e.weight;
                } else {
                    triplets.emplace_back(row, slot[e.target], -e.weight);
                }
            }
            triplets.emplace_back(row, row, diagonal);
        }
        Eigen::SparseMatrix<double> a(n, n);
        a.setFromTriplets(triplets.begin(), triplets.end());
        a.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) throw DomainError("singular system: " + lu.lastErrorMessage());
        Eigen::VectorXd x = lu.solve(rhs);
        Eigen::VectorXd correction = lu.solve(rhs - a * x);
        x += correction;
        for (std::size_t i = 0; i < inner.size(); ++i) sol.values[inner[i]] = x[static_cast<Eigen::Index>(i)];
    }
    sol.residual = interior_residual(g, sol.values);
    if (!(sol.residual <= 1e-10))
        throw DomainError("direct solve residual " + format_real(sol.residual) + " exceeds 1e-10");
    return sol;
}

OneEndedResult solve_one_ended(const LazyGraph& graph, const BoundaryData& data, const OneEndedOptions& options) {
    auto radii = options.radii;
    if (radii.size() < 2) throw InputError("solve_one_ended needs at least two radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw InputError("radii must be strictly increasing");
    if (options.method != SolveMethod::iterative && options.method != SolveMethod::direct)
        throw InputError("solve_one_ended supports the iterative and direct methods");
    const double ladder_tol = options.ladder_tol.value_or(options.tol);

    std::vector<Truncation> windows;
    windows.reserve(radii.size());
    windows.push_back(truncate(graph, radii.back()));
    const Truncation& top = windows.back();
    if (!top.ends.stable) throw DomainError("unstable ends: " + top.ends.note + "; enlarge the radius");
    if (top.ends.end_count() != 1)
        throw DomainError("multiple ends: found " + std::to_string(top.ends.end_count()) + ", expected 1");

    OneEndedResult result;
    result.continuity = check_continuity_at_infinity(data, top.ends, options.continuity_epsilons);
    if (!result.continuity.continuous()) throw DomainError("not continuous at infinity:\n" + result.continuity.to_text());

    const double end_value = data.end_value(top.ends.ends.front());
    const BoundaryData normalized = data.shifted(end_value);

    for (std::size_t i = 0; i + 1 < radii.size(); ++i) windows.push_back(truncate(graph, radii[i]));

    auto solve = [&](const Truncation& t) {
        if (options.method == SolveMethod::direct) return solve_direct(t.window, normalized, t.end_of_frontier);
        IterativeOptions it;
        it.tol = options.tol;
        return solve_iterative(t.window, normalized, t.end_of_frontier, it);
    };
    // windows: largest first, then ascending from the smallest.
    Solution finest = solve(windows[0]);
    Solution second = solve(windows.back());
    for (std::size_t i = 1; i + 1 < windows.size(); ++i) (void)solve(windows[i]);

    const WeightedGraph& smallest = windows[1].window;
    const WeightedGraph& second_window = windows.back().window;
    double diff = 0.0;
    for (const auto& name : smallest.names()) {
        double a = finest.values[top.window.at(name)];
        double b = second.values[second_window.at(name)];
        diff = std::max(diff, std::abs(a - b));
    }
    result.ladder_difference = diff;
    if (diff > ladder_tol)
        throw DomainError("no convergence in R: radii " + std::to_string(radii[radii.size() - 2]) + " and " +
                          std::to_string(radii.back()) + " differ by " + format_real(diff));

    Solution& sol = finest;
    const auto pinned = pinned_values(top.window, data, top.end_of_frontier);
    for (VertexIndex v = 0; v < top.window.size(); ++v) sol.values[v] += end_value;
    for (const auto& [v, value] : pinned) sol.values[v] = value;
    sol.residual = interior_residual(top.window, sol.values);
    std::string ladder;
    for (int r : radii) ladder += (ladder.empty() ? "" : ",") + std::to_string(r);
    sol.metadata.emplace_back("radii", ladder);
    sol.metadata.emplace_back("ladder_difference", format_real(diff));
    sol.metadata.emplace_back("end_value", format_real(end_value));
    result.solution = std::move(sol);
    result.truncation = std::move(windows[0]);
    return result;
}

void write_solution_csv(std::ostream& out, const WeightedGraph& window, const Solution& solution) {
    out << "# meta: method=" << to_string(solution.method) << " iterations=" << solution.iterations
        << " residual=" << format_real(solution.residual);
    for (const auto& [k, v] : solution.metadata) out << ' ' << k << '=' << v;
    out << "\nvertex,value\n";
    for (VertexIndex v = 0; v < window.size(); ++v)
        out << csv_field(window.name(v)) << ',' << format_real(solution.values[v]) << '\n';
}

}  // namespace gpot
