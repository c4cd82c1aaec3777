#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "gpot/ends.hpp"
#include "gpot/error.hpp"
#include "gpot/greens.hpp"
#include "oracles.hpp"

using namespace gpot;
using gpot::testing::Rng;

namespace {

WeightedGraph parse(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

}  // namespace

TEST(Greens, SingleStepToBoundary) {
    WeightedGraph g = parse("edge x a 1\nedge a a 1\n");
    GreensEntry e = greens_function(g, g.at("x"), g.at("x"));
    EXPECT_EQ(e.value, 1.0);
    EXPECT_TRUE(e.summable);
    GreensEntry to_a = greens_function(g, g.at("x"), g.at("a"));
    EXPECT_EQ(to_a.value, 1.0);
}

TEST(Greens, PathAgainstDense) {
    WeightedGraph g = gpot::testing::path_abc();
    EXPECT_EQ(greens_function(g, g.at("b"), g.at("b")).value, 1.0);
    EXPECT_EQ(greens_function(g, g.at("b"), g.at("c")).value, 0.5);
}

TEST(Greens, LiteralKernelAccumulatesAtBoundary) {
    WeightedGraph g = gpot::testing::path_abc();
    GreensOptions o;
    o.kernel = GreensKernel::literal;
    o.max_order = 200;
    GreensEntry e = greens_function(g, g.at("b"), g.at("c"), o);
    EXPECT_FALSE(e.summable);
    EXPECT_DOUBLE_EQ(e.value, 0.5 * 200);
}

TEST(GreensProperty, MatchesDenseInverse) {
    Rng rng(41);
    GreensOptions o;
    o.max_order = 200000;
    o.tail_tol = 1e-13;
    for (int trial = 0; trial < 30; ++trial) {
        WeightedGraph g = gpot::testing::random_window(rng, {.min_vertices = 3, .max_vertices = 60});
        std::vector<VertexIndex> in = interior(g);
        std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
        const VertexIndex x = in[pick(rng) % in.size()];
        const VertexIndex y = static_cast<VertexIndex>(pick(rng));
        const double oracle = gpot::testing::dense_green(g, x, y);
        GreensEntry e = greens_function(g, x, y, o);
        // Slowly mixing windows decay geometrically but above the 0.99 verdict
        // threshold; the partial sum must still match.
        if (!e.summable) ASSERT_GE(e.decay_ratio, 0.99) << "trial " << trial;
        ASSERT_NEAR(e.value, oracle, 1e-7 * (1.0 + oracle)) << "trial " << trial;
        GreensColumn column = greens_column(g, y, o);
        for (VertexIndex v : in) ASSERT_NEAR(column.values[v], gpot::testing::dense_green(g, v, y), 1e-7 * (1.0 + oracle));
    }
}

TEST(GreensProperty, PartialSumsNonDecreasing) {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        WeightedGraph g = gpot::testing::random_window(rng, {.min_vertices = 3, .max_vertices = 40});
        std::vector<VertexIndex> in = interior(g);
        const VertexIndex x = in.front();
        for (VertexIndex y = 0; y < g.size(); ++y) {
            double previous = -1.0;
            for (std::size_t k = 0; k <= 25; ++k) {
                GreensOptions o;
                o.max_order = k;
                GreensEntry e = greens_function(g, x, y, o);
                ASSERT_GE(e.value, 0.0);
                ASSERT_GE(e.value, previous);
                previous = e.value;
            }
            if (y == x) ASSERT_GE(previous, 1.0);
        }
    }
}

TEST(Greens, TreeIsSummableAndVanishesAlongRay) {
    Truncation t = truncate(families::tree(3), 8);
    const VertexIndex y = t.window.at("t1");
    GreensOptions o;
    o.max_order = 500;
    GreensEntry at_y = greens_function(t.window, y, y, o);
    EXPECT_TRUE(at_y.summable);
    EXPECT_LT(at_y.tail_bound, 1e-6);
    double previous = INFINITY;
    std::string x = "t11";
    for (int depth = 2; depth <= 7; ++depth, x += "1") {
        GreensEntry e = greens_function(t.window, t.window.at(x), y, o);
        EXPECT_TRUE(e.summable);
        EXPECT_LT(e.value, previous) << x;
        previous = e.value;
    }
    EXPECT_LT(previous, 0.01);
    EXPECT_EQ(greens_function(t.window, t.window.at("t22"), y, o).value, 0.0);
}

TEST(Greens, LineIsEmpiricallyDivergent) {
    Truncation t = truncate(families::line(), 1000);
    GreensOptions o;
    o.max_order = 500;
    GreensEntry e = greens_function(t.window, t.window.at("5"), t.window.at("3"), o);
    EXPECT_FALSE(e.summable);
    EXPECT_TRUE(std::isinf(e.tail_bound));
}

TEST(Vanishing, TrivialEpsilon) {
    EndDecomposition d = detect_ends(families::line(), default_radii(20));
    VanishingReport r = check_vanishing_at_infinity(d, "0", 1.0, 50, 10);
    EXPECT_TRUE(r.found);
    EXPECT_EQ(r.n1, 0u);
    EXPECT_EQ(r.n2, 0);
}

TEST(Vanishing, TreeFindsPair) {
    EndDecomposition d = detect_ends(families::tree(3), default_radii(8));
    VanishingReport r = check_vanishing_at_infinity(d, "t", 0.01, 200, 8);
    EXPECT_TRUE(r.found) << r.to_text();
    EXPECT_LT(r.n2, 8);
    EXPECT_EQ(r.to_text().rfind("vanishing epsilon 0.01", 0), 0u);
}

TEST(Vanishing, LineNotFound) {
    EndDecomposition d = detect_ends(families::line(), default_radii(300));
    VanishingReport r = check_vanishing_at_infinity(d, "0", 0.01, 400, 30);
    EXPECT_FALSE(r.found);
    EXPECT_NE(r.to_text().find("not found within budget"), std::string::npos);
}

TEST(Vanishing, RequiresAbsorbingTarget) {
    EndDecomposition d = detect_ends(families::line(), default_radii(20));
    EXPECT_THROW(check_vanishing_at_infinity(d, "3", 0.01, 50, 10), InputError);
}
