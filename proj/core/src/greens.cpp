#include "gpot/greens.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>

#include "gpot/error.hpp"
#include "gpot/format.hpp"
#include "gpot/parallel.hpp"

namespace gpot {

namespace {

constexpr std::size_t kDecadePairs = 10;
constexpr double kGeometricRatio = 0.99;

bool killed(const WeightedGraph& g, GreensKernel kernel, VertexIndex v) {
    return kernel == GreensKernel::interior_killed && g.is_boundary(v);
}

// Feeds increments in order and keeps the running verdict.
class SeriesTracker {
public:
    explicit SeriesTracker(double tail_tol) : tail_tol_(tail_tol) {
        entry_.tail_bound = std::numeric_limits<double>::infinity();
    }

    // Returns true when summation may stop.
    bool add(std::size_t k, double increment, bool died) {
        entry_.order = k;
        entry_.last_increment = increment;
        if (k % 2 == 0) {
            pending_ = increment;
        } else {
            pairs_.push_back(pending_ + increment);
        }
        if (died) {
            entry_.summable = true;
            entry_.decay_ratio = 0.0;
            entry_.tail_bound = 0.0;
            return true;
        }
        if (k % 2 == 0 || pairs_.size() <= kDecadePairs) return false;
        const double now = pairs_.back();
        const double before = pairs_[pairs_.size() - 1 - kDecadePairs];
        double r = 1.0;
        if (before > 0.0) r = std::pow(now / before, 1.0 / (2.0 * kDecadePairs));
        else if (now > 0.0) r = std::numeric_limits<double>::infinity();
        entry_.decay_ratio = r;
        if (r < kGeometricRatio) {
            const double q = r * r;
            entry_.summable = true;
            entry_.tail_bound = now * q / (1.0 - q);
            return entry_.tail_bound < tail_tol_;
        }
        entry_.summable = false;
        entry_.tail_bound = std::numeric_limits<double>::infinity();
        return false;
    }

    GreensEntry& entry() { return entry_; }

private:
    double tail_tol_;
    double pending_ = 0.0;
    std::vector<double> pairs_;
    GreensEntry entry_;
};

void check_options(const WeightedGraph& g, VertexIndex y, const GreensOptions& o) {
    if (y >= g.size()) throw InputError("vertex not found");
    if (!(o.tail_tol > 0.0)) throw InputError("tail tolerance must be positive");
}

// Backward step: next(x) = Σ λ(x,ζ) v(ζ), zero on killed rows. Returns sup |next|.
double backward_step(const WeightedGraph& g, GreensKernel kernel, const std::vector<double>& v,
                     std::vector<double>& next) {
    double sup = 0.0;
    std::mutex lock;
    parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
        double local = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto x = static_cast<VertexIndex>(i);
            double sum = 0.0;
            if (!killed(g, kernel, x))
                for (const Entry& e : g.row(x)) sum += e.weight * v[e.target];
            next[x] = sum;
            local = std::max(local, sum);
        }
        std::lock_guard guard(lock);
        sup = std::max(sup, local);
    });
    return sup;
}

bool reaches(const WeightedGraph& g, GreensKernel kernel, VertexIndex x, VertexIndex y) {
    std::vector<char> seen(g.size(), 0);
    std::deque<VertexIndex> queue{x};
    seen[x] = 1;
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        if (v == y) return true;
        if (killed(g, kernel, v)) continue;
        for (const Entry& e : g.row(v))
            if (!seen[e.target]) {
                seen[e.target] = 1;
                queue.push_back(e.target);
            }
    }
    return false;
}

}  // namespace

GreensEntry greens_function(const WeightedGraph& g, VertexIndex x, VertexIndex y, const GreensOptions& options) {
    check_options(g, y, options);
    if (x >= g.size()) throw InputError("vertex not found");
    if (g.is_boundary(x)) throw InputError("Green's function source " + g.name(x) + " must be interior");

    // y out of reach: every term vanishes.
    if (!reaches(g, options.kernel, x, y)) {
        GreensEntry zero;
        zero.decay_ratio = 0.0;
        zero.summable = true;
        return zero;
    }

    SeriesTracker tracker(options.tail_tol);
    std::vector<double> p(g.size(), 0.0), next(g.size(), 0.0);
    std::vector<VertexIndex> support{x}, next_support;
    std::vector<char> in_next(g.size(), 0);
    p[x] = 1.0;
    double value = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double increment = p[y];
        value += increment;
        const bool died = support.empty();
        if (tracker.add(k, increment, died) || k == options.max_order) break;

        next_support.clear();
        for (VertexIndex v : support) {
            if (killed(g, options.kernel, v)) continue;
            for (const Entry& e : g.row(v)) {
                if (!in_next[e.target]) {
                    in_next[e.target] = 1;
                    next_support.push_back(e.target);
                }
                next[e.target] += p[v] * e.weight;
            }
        }
        for (VertexIndex v : support) p[v] = 0.0;
        for (VertexIndex v : next_support) {
            in_next[v] = 0;
            if (next[v] > 0.0) p[v] = next[v];
            next[v] = 0.0;
        }
        support.clear();
        for (VertexIndex v : next_support)
            if (p[v] > 0.0) support.push_back(v);
    }
    GreensEntry out = tracker.entry();
    out.value = value;
    return out;
}

GreensColumn greens_column(const WeightedGraph& g, VertexIndex y, const GreensOptions& options) {
    check_options(g, y, options);
    SeriesTracker tracker(options.tail_tol);
    GreensColumn out;
    out.values = VertexFunction(g.size(), 0.0);
    std::vector<double> v(g.size(), 0.0), next(g.size(), 0.0);
    v[y] = 1.0;
    double sup = 1.0;
    for (std::size_t k = 0;; ++k) {
        for (VertexIndex x = 0; x < g.size(); ++x) out.values[x] += v[x];
        if (tracker.add(k, sup, sup == 0.0) || k == options.max_order) break;
        sup = backward_step(g, options.kernel, v, next);
        std::swap(v, next);
    }
    out.summary = tracker.entry();
    out.summary.value = out.values[y];
    return out;
}

std::string VanishingReport::to_text() const {
    std::string out = "vanishing epsilon " + format_real(epsilon) + " k_max " + std::to_string(k_max) +
                      " dist_max " + std::to_string(dist_max) + " ";
    if (found) out += "found N1 " + std::to_string(n1) + " N2 " + std::to_string(n2) + "\n";
    else out += "not found within budget\n";
    return out;
}

VanishingReport check_vanishing_at_infinity(const EndDecomposition& decomposition, std::string_view y0,
                                            double epsilon, std::size_t k_max, int dist_max) {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (k_max < 1 || dist_max < 1) throw InputError("k_max and dist_max must be positive");
    VanishingReport report;
    report.epsilon = epsilon;
    report.k_max = k_max;
    report.dist_max = dist_max;
    if (epsilon >= 1.0) {
        report.found = true;
        return report;
    }

    const Ball& ball = *decomposition.ball;
    auto source = ball.find(std::string(y0));
    if (!source) throw InputError("vertex not found: " + std::string(y0));
    if (!ball.absorbing[*source]) throw InputError(std::string(y0) + " is not a boundary point");

    std::vector<int> dist(ball.size(), -1);
    std::deque<VertexIndex> queue{*source};
    dist[*source] = 0;
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        if (dist[v] == dist_max) continue;
        for (VertexIndex u : ball.neighbors(v)) {
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }

    const Truncation window = truncate(decomposition);
    const WeightedGraph& g = window.window;
    // peak[d][k]: max of λ^⋄k(x,y₀) over x at distance d.
    std::vector<std::vector<double>> peak(static_cast<std::size_t>(dist_max) + 1, std::vector<double>(k_max + 1, 0.0));
    std::vector<double> v(g.size(), 0.0), next(g.size(), 0.0);
    v[*source] = 1.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        backward_step(g, GreensKernel::literal, v, next);
        std::swap(v, next);
        for (VertexIndex x = 0; x < g.size(); ++x)
            if (dist[x] > 0) peak[dist[x]][k] = std::max(peak[dist[x]][k], v[x]);
    }
    report.peak_by_distance.assign(peak.size(), 0.0);
    for (std::size_t d = 0; d < peak.size(); ++d)
        report.peak_by_distance[d] = *std::max_element(peak[d].begin(), peak[d].end());
    report.peak_by_distance[0] = 1.0;

    // worst[k] is the max over distances in (n2, dist_max]; grow it as n2 decreases.
    std::vector<double> worst(k_max + 1, 0.0);
    std::optional<std::pair<std::size_t, int>> best;
    for (int n2 = dist_max - 1; n2 >= 0; --n2) {
        for (std::size_t k = 0; k <= k_max; ++k) worst[k] = std::max(worst[k], peak[n2 + 1][k]);
        std::size_t n1 = 0;
        for (std::size_t k = k_max; k >= 1; --k) {
            if (worst[k] >= epsilon) {
                n1 = k;
                break;
            }
        }
        if (n1 < k_max) best = {n1, n2};
        else break;  // larger regions only add violations
    }
    if (best) {
        report.found = true;
        report.n1 = best->first;
        report.n2 = best->second;
    }
    return report;
}

}  // namespace gpot
