#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "gpot/ends.hpp"
#include "gpot/error.hpp"
#include "gpot/graph.hpp"

using namespace gpot;

namespace {

std::string point(int x, int y) { return std::to_string(x) + "," + std::to_string(y); }

// Undirected lattice distances from (0,1) on ℤ×ℕ where the axis only touches
// the point above it.
std::map<std::string, int> half_plane_ball(int radius) {
    std::map<std::pair<int, int>, int> dist{{{0, 1}, 0}};
    std::deque<std::pair<int, int>> queue{{0, 1}};
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        const int d = dist[{x, y}];
        if (d == radius) continue;
        std::vector<std::pair<int, int>> next;
        if (y == 0) next = {{x, 1}};
        else next = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
        for (auto p : next)
            if (!dist.count(p)) {
                dist[p] = d + 1;
                queue.push_back(p);
            }
    }
    std::map<std::string, int> out;
    for (auto& [p, d] : dist) out[point(p.first, p.second)] = d;
    return out;
}

std::set<std::string> frontier_names(const Truncation& t) {
    std::set<std::string> out;
    for (VertexIndex v : t.frontier) out.insert(t.window.name(v));
    return out;
}

BoundaryData axis_data(std::function<double(int)> f, double end_value) {
    BoundaryData d;
    d.rule = [f](std::string_view id) { return f(std::stoi(std::string(id.substr(0, id.find(','))))); };
    d.end_values[EndId{0}] = end_value;
    return d;
}

}  // namespace

TEST(Truncate, HalfPlaneRadiusTwo) {
    Truncation t = truncate(families::half_plane(), 2);
    std::map<std::string, int> oracle = half_plane_ball(2);
    EXPECT_EQ(oracle.size(), 12u);
    ASSERT_EQ(t.window.size(), oracle.size());
    for (VertexIndex v = 0; v < t.window.size(); ++v) {
        ASSERT_TRUE(oracle.count(t.window.name(v))) << t.window.name(v);
        EXPECT_EQ(t.distance(v), oracle[t.window.name(v)]);
    }
    EXPECT_EQ(frontier_names(t), (std::set<std::string>{"-1,2", "-2,1", "0,3", "1,2", "2,1"}));
    for (VertexIndex v : t.frontier) EXPECT_EQ(t.window.weight(v, v), 1.0);
    EXPECT_TRUE(validate(t.window).ok());
}

TEST(Truncate, MatchesBruteForceBall) {
    for (int radius : {1, 3, 7, 15}) {
        Truncation t = truncate(families::half_plane(), radius);
        std::map<std::string, int> oracle = half_plane_ball(radius);
        ASSERT_EQ(t.window.size(), oracle.size());
        for (VertexIndex v = 0; v < t.window.size(); ++v) ASSERT_EQ(t.distance(v), oracle.at(t.window.name(v)));
    }
}

TEST(Truncate, PreservesInteriorRows) {
    LazyGraph g = families::half_plane();
    Truncation t = truncate(g, 9);
    for (VertexIndex v = 0; v < t.window.size(); ++v) {
        if (t.is_frontier(v)) continue;
        std::vector<LazyNeighbor> row = g.row(t.window.name(v));
        ASSERT_EQ(row.size(), t.window.row(v).size());
        for (const LazyNeighbor& n : row) ASSERT_EQ(t.window.weight(v, t.window.at(n.id)), n.weight);
    }
}

TEST(Truncate, ExhaustsFiniteGraph) {
    WeightedGraph path = gpot::testing::path_abc();
    Truncation t = truncate(LazyGraph::from_graph(path, "b"), 4);
    EXPECT_TRUE(t.frontier.empty());
    EXPECT_EQ(t.window.size(), 3u);
    for (VertexIndex v = 0; v < 3; ++v)
        for (const Entry& e : path.row(v)) EXPECT_EQ(t.window.weight(t.window.at(path.name(v)), t.window.at(path.name(e.target))), e.weight);
}

TEST(Truncate, LadderFrontierHasTwoComponents) {
    for (int radius : {6, 8, 11, 16}) {
        Truncation t = truncate(families::ladder(), radius);
        std::set<std::string> f = frontier_names(t);
        // Undirected components of the frontier inside the window.
        std::set<std::string> left, right;
        for (const std::string& id : f) (std::stoi(id) < 0 ? left : right).insert(id);
        EXPECT_FALSE(left.empty());
        EXPECT_FALSE(right.empty());
        std::set<EndId> left_ends, right_ends;
        for (VertexIndex v : t.frontier)
            (std::stoi(t.window.name(v)) < 0 ? left_ends : right_ends).insert(t.end_of_frontier.at(v));
        EXPECT_EQ(left_ends.size(), 1u);
        EXPECT_EQ(right_ends.size(), 1u);
        EXPECT_NE(*left_ends.begin(), *right_ends.begin());
    }
}

TEST(Truncate, RejectsInvalidRows) {
    LazyGraph bad("a", [](const std::string& id) {
        if (id == "a") return std::vector<LazyNeighbor>{{"b", 0.7}};
        return std::vector<LazyNeighbor>{{id, 1.0}};
    });
    EXPECT_THROW(truncate(bad, 2), InputError);
}

TEST(DetectEnds, FamilyCounts) {
    EndDecomposition hp = detect_ends(families::half_plane(), default_radii(24));
    EXPECT_TRUE(hp.stable);
    EXPECT_EQ(hp.end_count(), 1u);
    EndDecomposition ladder = detect_ends(families::ladder(), {3, 4, 5, 8});
    EXPECT_TRUE(ladder.stable);
    EXPECT_EQ(ladder.end_count(), 2u);
    EndDecomposition line = detect_ends(families::line(), default_radii(20));
    EXPECT_TRUE(line.stable);
    EXPECT_EQ(line.end_count(), 2u);
    EndDecomposition finite = detect_ends(LazyGraph::from_graph(gpot::testing::path_abc(), "b"), {1, 2, 3});
    EXPECT_EQ(finite.end_count(), 0u);
    EXPECT_THROW(detect_ends(families::line(), {2, 4}), InputError);
}

TEST(DetectEnds, TreeIsUnstable) {
    EndDecomposition tree = detect_ends(families::tree(3), default_radii(8));
    EXPECT_FALSE(tree.stable);
    EXPECT_FALSE(tree.note.empty());
}

TEST(DetectEnds, SerializesFrontierSizes) {
    EndDecomposition ladder = detect_ends(families::ladder(), default_radii(12));
    EXPECT_EQ(ladder.to_text(), "end 0 frontier-size 4\nend 1 frontier-size 4\n");
}

TEST(EndsProperty, ConsistentAcrossShiftedRadii) {
    for (const char* name : {"half-plane", "ladder", "line"}) {
        LazyGraph g = families::parse(name);
        for (int r : {4, 6, 9}) {
            EndDecomposition a = detect_ends(g, {r, r + 2, r + 4});
            EndDecomposition b = detect_ends(g, {r + 2, r + 4, r + 6});
            ASSERT_TRUE(a.stable && b.stable) << name << " " << r;
            ASSERT_EQ(a.end_count(), b.end_count()) << name << " " << r;
        }
    }
}

TEST(EndsProperty, FrontierMapsToOneEnd) {
    for (const char* name : {"half-plane", "ladder", "line"}) {
        Truncation t = truncate(families::parse(name), 14);
        ASSERT_TRUE(t.ends.stable);
        ASSERT_EQ(t.end_of_frontier.size(), t.frontier.size());
        for (VertexIndex v : t.frontier) {
            ASSERT_TRUE(t.ends.end_of(v).has_value());
            ASSERT_EQ(*t.ends.end_of(v), t.end_of_frontier.at(v));
        }
    }
}

TEST(ClassifySequence, HalfPlaneRays) {
    EndDecomposition d = detect_ends(families::half_plane(), default_radii(30));
    for (int x : {-3, 0, 5}) {
        std::vector<std::string> ray;
        for (int n = 1; n <= 30 - std::abs(x); ++n) ray.push_back(point(x, n));
        SequenceClass c = classify_sequence(d, ray);
        EXPECT_TRUE(c.converges) << x;
        EXPECT_EQ(c.end, EndId{0});
    }
    std::vector<std::string> diagonal;
    for (int n = 1; n <= 15; ++n) diagonal.push_back(point(n, n));
    EXPECT_TRUE(classify_sequence(d, diagonal).converges);
}

TEST(ClassifySequence, DivergentCases) {
    EndDecomposition hp = detect_ends(families::half_plane(), default_radii(20));
    std::vector<std::string> constant{"0,1", "0,2", "0,3", "0,3", "0,3"};
    EXPECT_FALSE(classify_sequence(hp, constant).converges);

    EndDecomposition ladder = detect_ends(families::ladder(), default_radii(24));
    std::vector<std::string> alternating;
    for (int n = 1; n <= 22; ++n) alternating.push_back(point(n % 2 ? n : -n, 1));
    EXPECT_FALSE(classify_sequence(ladder, alternating).converges);

    std::vector<std::string> right, left;
    for (int n = 1; n <= 22; ++n) {
        right.push_back(point(n, 2));
        left.push_back(point(-n, 1));
    }
    SequenceClass r = classify_sequence(ladder, right);
    SequenceClass l = classify_sequence(ladder, left);
    ASSERT_TRUE(r.converges && l.converges);
    EXPECT_EQ(l.end, EndId{0});
    EXPECT_EQ(r.end, EndId{1});
    std::vector<std::string> far{"0,1", "400,1"};
    EXPECT_THROW(classify_sequence(ladder, far), DomainError);
}

TEST(Continuity, ZeroDataIsContinuous) {
    EndDecomposition d = detect_ends(families::half_plane(), default_radii(20));
    BoundaryData data;
    data.end_values[EndId{0}] = 0.0;
    std::vector<double> eps{0.5, 0.01, 1e-6};
    EXPECT_TRUE(check_continuity_at_infinity(data, d, eps).continuous());
}

TEST(Continuity, DecayingDataAtRadius101) {
    EndDecomposition d = detect_ends(families::half_plane(), default_radii(101));
    BoundaryData data = axis_data([](int x) { return 1.0 / (1.0 + std::abs(x)); }, 0.0);
    std::vector<double> eps{0.1, 0.01};
    ContinuityReport r = check_continuity_at_infinity(data, d, eps);
    EXPECT_TRUE(r.continuous()) << r.to_text();
    ASSERT_EQ(r.items.size(), 2u);
    // Violators are the axis points with |x| < 1/ε − 1; (x,0) sits at distance |x| + 1.
    EXPECT_EQ(r.items[0].violators, 0u);
    EXPECT_EQ(r.items[1].max_violator_distance, 99);
    EXPECT_EQ(r.items[1].shell_violators, 0u);
}

TEST(Continuity, SignOscillationViolates) {
    EndDecomposition d = detect_ends(families::half_plane(), default_radii(30));
    BoundaryData data = axis_data([](int x) { return x % 2 ? 1.0 : -1.0; }, 0.0);
    std::vector<double> eps{0.5};
    ContinuityReport r = check_continuity_at_infinity(data, d, eps);
    EXPECT_FALSE(r.continuous());
    EXPECT_GT(r.items[0].shell_violators, 0u);
}
