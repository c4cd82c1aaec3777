#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status = 0;
    std::string out;
    std::string err;
};

// Fixture paths in the arguments are relative so the meta headers are portable.
CliRun run(std::vector<std::string> args) {
    fs::current_path(GPOT_FIXTURE_DIR);
    std::ostringstream out, err;
    CliRun r;
    r.status = gpot::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ' ' || c == ',' || c == '=' || c == '"') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool as_number(const std::string& s, double& value) {
    char* end = nullptr;
    value = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !s.empty();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// Token-wise comparison; numbers within 1e-9 absolute plus 1e-9 relative.
std::string compare(const std::string& expected, const std::string& actual) {
    auto e = lines(expected), a = lines(actual);
    if (e.size() != a.size())
        return "line count " + std::to_string(a.size()) + " != golden " + std::to_string(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        auto et = tokens(e[i]), at = tokens(a[i]);
        if (et.size() != at.size()) return "line " + std::to_string(i + 1) + ": '" + a[i] + "' vs golden '" + e[i] + "'";
        for (std::size_t j = 0; j < et.size(); ++j) {
            double x, y;
            if (as_number(et[j], x) && as_number(at[j], y)) {
                if (std::isinf(x) && x == y) continue;
                if (std::abs(x - y) <= 1e-9 + 1e-9 * std::abs(x)) continue;
            } else if (et[j] == at[j]) {
                continue;
            }
            return "line " + std::to_string(i + 1) + ": '" + a[i] + "' vs golden '" + e[i] + "'";
        }
    }
    return {};
}

void check_golden(const std::string& name, const std::string& actual) {
    const fs::path path = fs::path(GPOT_GOLDEN_DIR) / (name + ".csv");
    if (std::getenv("GPOT_UPDATE_GOLDEN")) {
        std::ofstream(path) << actual;
        return;
    }
    std::ifstream in(path);
    ASSERT_TRUE(in) << "missing golden " << path;
    std::stringstream expected;
    expected << in.rdbuf();
    EXPECT_EQ(compare(expected.str(), actual), "") << name;
}

std::map<std::string, double> solution_values(const std::string& csv) {
    std::map<std::string, double> out;
    for (const std::string& line : lines(csv)) {
        if (line.empty() || line[0] == '#' || line == "vertex,value") continue;
        const auto comma = line.rfind(',');
        std::string id = line.substr(0, comma);
        if (id.size() >= 2 && id.front() == '"') id = id.substr(1, id.size() - 2);
        out[id] = std::stod(line.substr(comma + 1));
    }
    return out;
}

struct GoldenCase {
    const char* name;
    std::vector<std::string> args;
    int status;
};

void PrintTo(const GoldenCase& c, std::ostream* os) { *os << c.name; }

class Golden : public ::testing::TestWithParam<GoldenCase> {};

TEST_P(Golden, MatchesCommittedOutput) {
    const GoldenCase& c = GetParam();
    CliRun r = run(c.args);
    EXPECT_EQ(r.status, c.status) << r.err;
    check_golden(c.name, r.out);
}

const std::vector<GoldenCase> kCases = {
    {"validate_path", {"validate", "--graph", "path.graph"}, 0},
    {"validate_bad_rowsum", {"validate", "--graph", "bad_rowsum.graph"}, 1},
    {"boundary_half_plane", {"boundary", "--family", "half-plane", "--radius", "3"}, 0},
    {"ends_ladder", {"ends", "--family", "ladder", "--radius", "12", "--sequence", "1,1", "2,1", "3,1", "5,2", "8,1", "10,2"}, 0},
    {"ends_half_plane_continuity",
     {"ends", "--family", "half-plane", "--radius", "20", "--data", "indicator.data", "--epsilons", "0.5,0.01"}, 0},
    {"ends_tree_unstable", {"ends", "--family", "tree:3", "--radius", "6"}, 1},
    {"solve_path_iterative", {"solve", "--graph", "path.graph", "--data", "path.data"}, 0},
    {"solve_path_direct", {"solve", "--graph", "path.graph", "--data", "path.data", "--method", "direct"}, 0},
    {"solve_four_cycle_direct", {"solve", "--graph", "four_cycle.graph", "--data", "four_cycle.data", "--method", "direct"}, 0},
    {"solve_half_plane_zero", {"solve", "--family", "half-plane", "--radius", "30", "--method", "iterative", "--data", "zero.data"}, 0},
    {"solve_half_plane_one_ended",
     {"solve", "--family", "half-plane", "--radius", "12", "--method", "one-ended", "--radii", "9,12", "--ladder-tol",
      "0.1", "--data", "indicator.data"},
     0},
    {"green_tree", {"green", "--family", "tree:3", "--radius", "6", "--x", "t0", "--y", "t0", "--max-order", "500"}, 0},
    {"green_tree_vanish", {"green", "--family", "tree:3", "--radius", "6", "--vanish", "--epsilon", "0.01"}, 0},
    {"green_line", {"green", "--family", "line", "--radius", "600", "--x", "5", "--y", "3", "--max-order", "500"}, 0},
    {"green_path_literal", {"green", "--graph", "path.graph", "--x", "b", "--y", "c", "--kernel", "literal", "--max-order", "20"}, 0},
    {"schwarz_ladder",
     {"schwarz", "--family", "ladder", "--radius", "24", "--r-in", "6", "--r-out", "12", "--data", "ladder_logistic.data"}, 0},
    {"walk_path", {"walk", "--graph", "path.graph", "--data", "path.data", "--start", "b", "--walks", "2000", "--seed", "3"}, 0},
    {"walk_half_plane",
     {"walk", "--family", "half-plane", "--radius", "10", "--data", "indicator.data", "--start", "0,1", "--walks", "1000",
      "--seed", "11"},
     0},
};

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(kCases),
                         [](const auto& info) { return std::string(info.param.name); });

}  // namespace

TEST(Cli, ZeroDataGivesZeros) {
    CliRun r = run({"solve", "--family", "half-plane", "--radius", "30", "--method", "iterative", "--data", "zero.data"});
    ASSERT_EQ(r.status, 0) << r.err;
    auto values = solution_values(r.out);
    EXPECT_GT(values.size(), 900u);
    for (const auto& [id, v] : values) ASSERT_EQ(v, 0.0) << id;
    EXPECT_EQ(r.out.rfind("# meta: method=iterative", 0), 0u);
    EXPECT_NE(r.out.find("command=solve family=half-plane radius=30 tol=1e-08"), std::string::npos);
}

TEST(Cli, DirectAndIterativeAgree) {
    const double tol = 1e-8;
    for (const std::vector<std::string>& source :
         {std::vector<std::string>{"--family", "half-plane", "--radius", "15", "--data", "indicator.data"},
          std::vector<std::string>{"--graph", "four_cycle.graph", "--data", "four_cycle.data"}}) {
        std::vector<std::string> it{"solve", "--method", "iterative"}, dir{"solve", "--method", "direct"};
        it.insert(it.end(), source.begin(), source.end());
        dir.insert(dir.end(), source.begin(), source.end());
        CliRun a = run(it), b = run(dir);
        ASSERT_EQ(a.status, 0) << a.err;
        ASSERT_EQ(b.status, 0) << b.err;
        auto va = solution_values(a.out), vb = solution_values(b.out);
        ASSERT_EQ(va.size(), vb.size());
        for (const auto& [id, v] : va) ASSERT_NEAR(v, vb.at(id), 10 * tol) << id;
    }
}

TEST(Cli, SchwarzTrace) {
    const fs::path trace = fs::temp_directory_path() / "gpot_cli_trace.csv";
    CliRun r = run({"schwarz", "--family", "ladder", "--radius", "24", "--r-in", "6", "--r-out", "12", "--data",
                 "ladder_logistic.data", "--trace", trace.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    std::ifstream in(trace);
    std::stringstream text;
    text << in.rdbuf();
    check_golden("schwarz_ladder_trace", text.str());
    fs::remove(trace);
}

TEST(Cli, OutputFile) {
    const fs::path file = fs::temp_directory_path() / "gpot_cli_output.csv";
    CliRun r = run({"solve", "--graph", "path.graph", "--data", "path.data", "--output", file.string()});
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "");
    std::ifstream in(file);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(text.str(), run({"solve", "--graph", "path.graph", "--data", "path.data"}).out);
    fs::remove(file);
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::vector<std::string>> commands = {
        {"walk", "--family", "half-plane", "--radius", "10", "--data", "indicator.data", "--start", "0,1", "--walks", "3000"},
        {"solve", "--family", "half-plane", "--radius", "15", "--data", "indicator.data"},
        {"schwarz", "--family", "ladder", "--radius", "24", "--r-in", "6", "--r-out", "12", "--data", "ladder_logistic.data"},
    };
    for (const auto& c : commands) {
        CliRun a = run(c), b = run(c);
        EXPECT_EQ(a.status, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"validate", "--graph", "missing.graph"}).status, 2);
    EXPECT_EQ(run({"validate"}).status, 2);
    EXPECT_EQ(run({"validate", "--graph", "path.graph", "--family", "line", "--radius", "3"}).status, 2);
    EXPECT_EQ(run({"boundary", "--family", "moebius", "--radius", "3"}).status, 2);
    EXPECT_EQ(run({"solve", "--graph", "path.graph", "--method", "newton"}).status, 2);
    EXPECT_EQ(run({"frobnicate"}).status, 2);
    EXPECT_EQ(run({"walk", "--graph", "path.graph"}).status, 2);
    CliRun unstable = run({"solve", "--family", "ladder", "--radius", "12", "--method", "one-ended", "--data", "zero.data"});
    EXPECT_EQ(unstable.status, 1);
    EXPECT_NE(unstable.err.find("multiple ends"), std::string::npos);
    CliRun bad = run({"validate", "--graph", "bad_rowsum.graph"});
    EXPECT_EQ(bad.status, 1);
    EXPECT_NE(bad.out.find("VIOLATION row-sum b 1.1"), std::string::npos);
}
