#include "gpot/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gpot/error.hpp"
#include "gpot/format.hpp"
#include "gpot/parallel.hpp"

namespace gpot {

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) carry_ += (sum_ - t) + x;
        else carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace

std::uint64_t walk_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + index * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

VertexIndex sample_next(const WeightedGraph& g, VertexIndex x, double u) {
    auto row = g.row(x);
    if (row.empty()) throw InputError("vertex " + g.name(x) + " has an empty row");
    double total = 0.0;
    for (const Entry& e : row) total += e.weight;
    const double target = u * total;
    double cumulative = 0.0;
    for (const Entry& e : row) {
        cumulative += e.weight;
        if (target < cumulative) return e.target;
    }
    return row.back().target;
}

WalkOutcome run_walk(const WeightedGraph& g, const EndMap& end_map, VertexIndex start, std::uint64_t seed,
                     std::size_t max_steps) {
    if (start >= g.size()) throw InputError("vertex not found");
    std::mt19937_64 rng(seed);
    WalkOutcome out;
    VertexIndex x = start;
    while (!g.is_boundary(x) && out.steps < max_steps) {
        x = sample_next(g, x, uniform(rng));
        ++out.steps;
    }
    out.vertex = x;
    if (!g.is_boundary(x)) {
        out.kind = WalkKind::censored;
    } else if (auto it = end_map.find(x); it != end_map.end()) {
        out.kind = WalkKind::escaped;
        out.end = it->second;
    } else {
        out.kind = WalkKind::absorbed;
    }
    return out;
}

std::string Estimate::to_text() const {
    return format_real(mean) + " " + format_real(half_width_95) + " " + std::to_string(n_walks) + " " +
           format_real(censored_fraction) + " " + std::to_string(seed);
}

Estimate estimate_harmonic(const WeightedGraph& g, const BoundaryData& data, const EndMap& end_map, VertexIndex x,
                           std::size_t n_walks, std::uint64_t seed, std::size_t max_steps) {
    if (x >= g.size()) throw InputError("vertex not found");
    if (n_walks < 2) throw InputError("need at least two walks");

    std::vector<double> values(n_walks);
    parallel_for(
        n_walks,
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                WalkOutcome w = run_walk(g, end_map, x, walk_seed(seed, i), max_steps);
                switch (w.kind) {
                    case WalkKind::censored: values[i] = std::numeric_limits<double>::quiet_NaN(); break;
                    case WalkKind::escaped: values[i] = data.end_value(*w.end); break;
                    case WalkKind::absorbed: values[i] = data.value_at(g.name(w.vertex)); break;
                }
            }
        },
        64);

    Estimate est;
    est.seed = seed;
    est.n_walks = n_walks;
    std::size_t used = 0;
    double reference = 0.0;
    CompensatedSum shifted;
    for (double v : values) {
        if (std::isnan(v)) continue;
        if (used == 0) reference = v;
        shifted.add(v - reference);
        ++used;
    }
    est.censored_fraction = static_cast<double>(n_walks - used) / static_cast<double>(n_walks);
    est.unreliable = est.censored_fraction > 0.5;
    if (used < 2) throw DomainError("fewer than two walks finished within the step budget");
    const double offset = shifted.value() / static_cast<double>(used);
    est.mean = reference + offset;

    CompensatedSum squares;
    for (double v : values) {
        if (std::isnan(v)) continue;
        const double d = (v - reference) - offset;
        squares.add(d * d);
    }
    const double variance = squares.value() / static_cast<double>(used - 1);
    est.half_width_95 = 1.96 * std::sqrt(variance / static_cast<double>(used));
    return est;
}

}  // namespace gpot
