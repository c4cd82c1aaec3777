#include "oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gpot::testing {

Dense dense(const StructureFunction& f) {
    Dense m(f.size(), std::vector<double>(f.size(), 0.0));
    for (VertexIndex x = 0; x < f.size(); ++x)
        for (const Entry& e : f.row(x)) m[x][e.target] = e.weight;
    return m;
}

Dense dense(const WeightedGraph& g) {
    Dense m(g.size(), std::vector<double>(g.size(), 0.0));
    for (VertexIndex x = 0; x < g.size(); ++x)
        for (const Entry& e : g.row(x)) m[x][e.target] = e.weight;
    return m;
}

Dense multiply(const Dense& a, const Dense& b) {
    const std::size_t n = a.size();
    Dense c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

std::vector<double> dense_solve(Dense a, std::vector<double> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0.0) throw std::runtime_error("singular dense system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

VertexFunction dense_harmonic(const WeightedGraph& g, const std::map<VertexIndex, double>& pinned) {
    const std::size_t n = g.size();
    Dense a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (VertexIndex x = 0; x < n; ++x) {
        a[x][x] = 1.0;
        if (auto it = pinned.find(x); it != pinned.end()) {
            b[x] = it->second;
            continue;
        }
        for (const Entry& e : g.row(x)) a[x][e.target] -= e.weight;
    }
    return VertexFunction(dense_solve(std::move(a), std::move(b)));
}

double dense_green(const WeightedGraph& g, VertexIndex x, VertexIndex y) {
    const std::size_t n = g.size();
    Dense a(n, std::vector<double>(n, 0.0));
    for (VertexIndex v = 0; v < n; ++v) {
        a[v][v] = 1.0;
        if (g.is_boundary(v)) continue;
        for (const Entry& e : g.row(v)) a[v][e.target] -= e.weight;
    }
    std::vector<double> rhs(n, 0.0);
    rhs[y] = 1.0;
    return dense_solve(std::move(a), std::move(rhs))[x];
}

}  // namespace gpot::testing
