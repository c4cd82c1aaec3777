#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <sstream>

#include "gpot/boundary_data.hpp"
#include "gpot/dirichlet.hpp"
#include "gpot/ends.hpp"
#include "gpot/error.hpp"
#include "gpot/format.hpp"
#include "gpot/graph.hpp"
#include "gpot/greens.hpp"
#include "gpot/montecarlo.hpp"
#include "gpot/potential.hpp"
#include "gpot/schwarz.hpp"

namespace gpot::cli {

namespace {

struct SourceOptions {
    std::string graph;
    std::string family;
    std::string base;
    int radius = -1;
};

struct Options {
    SourceOptions source;
    std::string output;
    std::string data;

    // ends
    std::vector<int> radii;
    std::vector<std::string> sequence;

    // solve
    std::string method = "iterative";
    double tol = 1e-8;
    std::size_t max_iter = 1'000'000;
    std::optional<double> ladder_tol;
    std::vector<double> epsilons{0.01};

    // green
    std::string x, y;
    std::size_t max_order = 1000;
    double tail_tol = 1e-10;
    std::string kernel = "killed";
    bool vanish = false;
    std::string y0;
    double epsilon = 0.01;
    std::size_t k_max = 200;
    int dist_max = 0;

    // schwarz
    int r_in = 0;
    int r_out = 0;
    std::size_t max_sweeps = 100;
    std::string trace;

    // walk
    std::string start;
    std::size_t walks = 10000;
    std::uint64_t seed = 1;
    std::size_t max_steps = kDefaultMaxSteps;
};

class Meta {
public:
    template <class T>
    void add(std::string key, const T& value) {
        std::ostringstream s;
        s << value;
        pairs_.emplace_back(std::move(key), s.str());
    }
    void add_real(std::string key, double value) { pairs_.emplace_back(std::move(key), format_real(value)); }
    const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
    std::string line() const {
        std::string out = "# meta:";
        for (const auto& [k, v] : pairs_) out += " " + k + "=" + v;
        return out + "\n";
    }

private:
    std::vector<std::pair<std::string, std::string>> pairs_;
};

std::string join(const std::vector<int>& values) {
    std::string out;
    for (int v : values) out += (out.empty() ? "" : ",") + std::to_string(v);
    return out;
}

void require_one_source(const SourceOptions& s) {
    if (s.graph.empty() == s.family.empty()) throw InputError("give exactly one of --graph and --family");
}

void describe_source(const SourceOptions& s, Meta& meta) {
    if (!s.graph.empty()) meta.add("graph", s.graph);
    else meta.add("family", s.family);
    if (s.radius >= 0) meta.add("radius", s.radius);
}

// A finite window: the graph file itself, or a truncation of the family.
struct Window {
    WeightedGraph graph;
    EndMap end_map;
    std::optional<Truncation> truncation;
};

Window load_window(const SourceOptions& s) {
    require_one_source(s);
    Window w;
    if (!s.graph.empty()) {
        w.graph = load_graph(s.graph);
        return w;
    }
    if (s.radius < 1) throw InputError("--family needs --radius of at least 1");
    w.truncation = truncate(families::parse(s.family), s.radius);
    w.graph = w.truncation->window;
    w.end_map = w.truncation->end_of_frontier;
    return w;
}

LazyGraph load_lazy(const SourceOptions& s) {
    require_one_source(s);
    if (!s.family.empty()) return families::parse(s.family);
    WeightedGraph g = load_graph(s.graph);
    require_valid(g);
    std::string base = s.base.empty() ? (g.size() ? g.name(0) : "") : s.base;
    return LazyGraph::from_graph(std::move(g), base);
}

BoundaryData load_data(const Options& o) {
    if (o.data.empty()) return {};
    return load_boundary_data(o.data);
}

VertexIndex vertex(const WeightedGraph& g, const std::string& id, const char* flag) {
    if (id.empty()) throw InputError(std::string("missing ") + flag);
    return g.at(id);
}

void add_source_options(CLI::App* cmd, Options& o, bool with_base) {
    cmd->add_option("--graph", o.source.graph, "Graph file (edge lines)");
    cmd->add_option("--family", o.source.family, "half-plane | ladder | tree:<b> | line");
    cmd->add_option("--radius", o.source.radius, "Truncation radius for --family");
    if (with_base) cmd->add_option("--base", o.source.base, "Base vertex for --graph (default: first vertex)");
    cmd->add_option("--output", o.output, "Write results to this file instead of standard output");
}

int cmd_validate(const Options& o, std::ostream& out) {
    Window w = load_window(o.source);
    Meta meta;
    meta.add("command", "validate");
    describe_source(o.source, meta);
    out << meta.line();
    auto report = validate(w.graph);
    if (!report.ok()) {
        out << report.to_text();
        return 1;
    }
    out << "valid vertices " << w.graph.size() << " edges " << w.graph.edge_count() << " boundary "
        << kiselman_boundary(w.graph).size() << '\n';
    out << "connected " << (is_connected(w.graph) ? "yes" : "no") << '\n';
    auto qr = quasi_reversibility(w.graph);
    out << "quasi-reversible " << (qr.holds ? "yes" : "no") << '\n';
    for (const auto& [a, b] : qr.violations) out << "unreciprocated " << w.graph.name(a) << ' ' << w.graph.name(b) << '\n';
    return 0;
}

int cmd_boundary(const Options& o, std::ostream& out) {
    Window w = load_window(o.source);
    require_valid(w.graph);
    Meta meta;
    meta.add("command", "boundary");
    describe_source(o.source, meta);
    out << meta.line();
    for (VertexIndex v : sorted_by_id(w.graph, kiselman_boundary(w.graph))) {
        out << "boundary " << w.graph.name(v);
        if (auto it = w.end_map.find(v); it != w.end_map.end()) out << " frontier end " << to_index(it->second);
        out << '\n';
    }
    return 0;
}

int cmd_ends(const Options& o, std::ostream& out, std::ostream& err) {
    LazyGraph g = load_lazy(o.source);
    std::vector<int> radii = o.radii;
    if (radii.empty()) {
        if (o.source.radius < 1) throw InputError("give --radius or --radii");
        radii = default_radii(o.source.radius);
    }
    auto ball = explore_ball(g, radii.back());
    EndDecomposition d = decompose(ball, radii);
    Meta meta;
    meta.add("command", "ends");
    describe_source(o.source, meta);
    meta.add("radii", join(radii));
    meta.add("stable", d.stable ? "yes" : "no");
    out << meta.line();
    out << d.to_text();
    if (!o.sequence.empty()) {
        SequenceClass c = classify_sequence(d, o.sequence);
        if (c.converges) out << "sequence converges end " << to_index(c.end) << '\n';
        else out << "sequence divergent\n";
    }
    if (!o.data.empty()) out << check_continuity_at_infinity(load_data(o), d, o.epsilons).to_text();
    if (!d.stable) {
        err << "error: unstable ends: " << d.note << "; enlarge the radii\n";
        return 1;
    }
    return 0;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
    BoundaryData data = load_data(o);
    Meta meta;
    meta.add("command", "solve");
    describe_source(o.source, meta);
    meta.add_real("tol", o.tol);

    Solution sol;
    WeightedGraph window;
    if (o.method == "one-ended") {
        OneEndedOptions opt;
        opt.tol = o.tol;
        opt.radii = o.radii;
        if (opt.radii.empty()) {
            if (o.source.radius < 2) throw InputError("one-ended solve needs --radius or --radii");
            opt.radii = {o.source.radius / 2, o.source.radius};
        }
        opt.ladder_tol = o.ladder_tol;
        opt.continuity_epsilons = o.epsilons;
        auto result = solve_one_ended(load_lazy(o.source), data, opt);
        sol = std::move(result.solution);
        window = std::move(result.truncation.window);
    } else if (o.method == "iterative" || o.method == "direct") {
        Window w = load_window(o.source);
        require_valid(w.graph);
        if (o.method == "direct") {
            sol = solve_direct(w.graph, data, w.end_map);
        } else {
            IterativeOptions opt;
            opt.tol = o.tol;
            opt.max_iter = o.max_iter;
            sol = solve_iterative(w.graph, data, w.end_map, opt);
        }
        window = std::move(w.graph);
    } else {
        throw InputError("unknown method: " + o.method + " (expected iterative, direct or one-ended)");
    }
    for (const auto& w : sol.warnings) err << "warning: " << w << '\n';
    auto extra = meta.pairs();
    sol.metadata.insert(sol.metadata.begin(), extra.begin(), extra.end());
    write_solution_csv(out, window, sol);
    return 0;
}

int cmd_green(const Options& o, std::ostream& out) {
    Meta meta;
    meta.add("command", "green");
    describe_source(o.source, meta);
    if (o.vanish) {
        if (o.source.radius < 1) throw InputError("--vanish needs --radius");
        LazyGraph g = load_lazy(o.source);
        const int dist_max = o.dist_max > 0 ? o.dist_max : o.source.radius;
        auto d = decompose(explore_ball(g, o.source.radius), default_radii(o.source.radius));
        const std::string y0 = o.y0.empty() ? g.base() : o.y0;
        meta.add("y0", y0);
        out << meta.line();
        out << check_vanishing_at_infinity(d, y0, o.epsilon, o.k_max, dist_max).to_text();
        return 0;
    }
    Window w = load_window(o.source);
    require_valid(w.graph);
    GreensOptions opt;
    opt.max_order = o.max_order;
    opt.tail_tol = o.tail_tol;
    if (o.kernel == "literal") opt.kernel = GreensKernel::literal;
    else if (o.kernel != "killed") throw InputError("unknown kernel: " + o.kernel + " (expected killed or literal)");
    meta.add("kernel", o.kernel);
    meta.add("max_order", o.max_order);
    meta.add_real("tail_tol", o.tail_tol);
    VertexIndex x = vertex(w.graph, o.x, "--x");
    VertexIndex y = vertex(w.graph, o.y, "--y");
    GreensEntry e = greens_function(w.graph, x, y, opt);
    out << meta.line();
    out << "green " << o.x << ' ' << o.y << " value " << format_real(e.value) << " order " << e.order << " tail "
        << format_real(e.tail_bound) << " ratio " << format_real(e.decay_ratio) << ' '
        << (e.summable ? "summable" : "empirically-divergent") << '\n';
    return 0;
}

int cmd_schwarz(const Options& o, std::ostream& out) {
    SchwarzParams p;
    p.radius = o.source.radius;
    p.r_in = o.r_in;
    p.r_out = o.r_out;
    p.tol = o.tol;
    p.max_sweeps = o.max_sweeps;
    p.continuity_epsilons = o.epsilons;
    p.keep_snapshots = false;
    if (p.radius < 1) throw InputError("schwarz needs --radius");
    auto result = schwarz_solve(load_lazy(o.source), load_data(o), p);
    Meta meta;
    meta.add("command", "schwarz");
    describe_source(o.source, meta);
    meta.add_real("tol", o.tol);
    auto extra = meta.pairs();
    result.solution.metadata.insert(result.solution.metadata.begin(), extra.begin(), extra.end());
    write_solution_csv(out, result.truncation.window, result.solution);
    if (!o.trace.empty()) {
        std::ofstream t(o.trace);
        if (!t) throw InputError("cannot write trace file " + o.trace);
        write_trace_csv(t, result.trace);
    }
    return 0;
}

int cmd_walk(const Options& o, std::ostream& out, std::ostream& err) {
    Window w = load_window(o.source);
    require_valid(w.graph);
    BoundaryData data = load_data(o);
    VertexIndex x = vertex(w.graph, o.start, "--start");
    Estimate e = estimate_harmonic(w.graph, data, w.end_map, x, o.walks, o.seed, o.max_steps);
    Meta meta;
    meta.add("command", "walk");
    describe_source(o.source, meta);
    meta.add("start", o.start);
    meta.add("walks", o.walks);
    meta.add("seed", o.seed);
    meta.add("max_steps", o.max_steps);
    meta.add("rng", kRngName);
    out << meta.line();
    out << e.to_text() << '\n';
    if (e.unreliable) err << "warning: more than half of the walks were censored; the estimate is unreliable\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Harmonic functions and the Dirichlet problem on weighted graphs", "graph-potential"};
    app.require_subcommand(1);

    auto* validate_cmd = app.add_subcommand("validate", "Check the weight-function axioms");
    add_source_options(validate_cmd, o, false);

    auto* boundary_cmd = app.add_subcommand("boundary", "List the Kiselman boundary");
    add_source_options(boundary_cmd, o, false);

    auto* ends_cmd = app.add_subcommand("ends", "Detect ends by probing nested balls");
    add_source_options(ends_cmd, o, true);
    ends_cmd->add_option("--radii", o.radii, "Probe radii then the enclosing radius")->delimiter(',');
    ends_cmd->add_option("--sequence", o.sequence, "Vertex ids to classify, space separated (ids may contain commas)");
    ends_cmd->add_option("--data", o.data, "Boundary data for the continuity certificate");
    ends_cmd->add_option("--epsilons", o.epsilons, "Continuity tolerances")->delimiter(',');

    auto* solve_cmd = app.add_subcommand("solve", "Solve the Dirichlet problem");
    add_source_options(solve_cmd, o, true);
    solve_cmd->add_option("--method", o.method, "iterative | direct | one-ended");
    solve_cmd->add_option("--data", o.data, "Boundary data file");
    solve_cmd->add_option("--tol", o.tol, "Tolerance");
    solve_cmd->add_option("--max-iter", o.max_iter, "Sweep budget for the iterative method");
    solve_cmd->add_option("--radii", o.radii, "Radius ladder for one-ended solves")->delimiter(',');
    solve_cmd->add_option("--ladder-tol", o.ladder_tol, "Allowed disagreement across the radius ladder");
    solve_cmd->add_option("--epsilons", o.epsilons, "Continuity tolerances")->delimiter(',');

    auto* green_cmd = app.add_subcommand("green", "Green's function and vanishing diagnostics");
    add_source_options(green_cmd, o, true);
    green_cmd->add_option("--x", o.x, "Source vertex (interior)");
    green_cmd->add_option("--y", o.y, "Target vertex");
    green_cmd->add_option("--max-order", o.max_order, "Largest power K");
    green_cmd->add_option("--tail-tol", o.tail_tol, "Stop once the tail estimate is below this");
    green_cmd->add_option("--kernel", o.kernel, "killed | literal");
    green_cmd->add_flag("--vanish", o.vanish, "Search for the vanishing pair (N1, N2)");
    green_cmd->add_option("--y0", o.y0, "Boundary vertex for --vanish (default: base)");
    green_cmd->add_option("--epsilon", o.epsilon, "Threshold for --vanish");
    green_cmd->add_option("--k-max", o.k_max, "Largest power for --vanish");
    green_cmd->add_option("--dist-max", o.dist_max, "Largest distance for --vanish (default: radius)");

    auto* schwarz_cmd = app.add_subcommand("schwarz", "Alternating solve for graphs with finitely many ends");
    add_source_options(schwarz_cmd, o, true);
    schwarz_cmd->add_option("--data", o.data, "Boundary data file");
    schwarz_cmd->add_option("--r-in", o.r_in, "Radius of the inner slices")->required();
    schwarz_cmd->add_option("--r-out", o.r_out, "Radius of the outer slices")->required();
    schwarz_cmd->add_option("--tol", o.tol, "Sweep tolerance");
    schwarz_cmd->add_option("--max-sweeps", o.max_sweeps, "Sweep budget");
    schwarz_cmd->add_option("--epsilons", o.epsilons, "Continuity tolerances")->delimiter(',');
    schwarz_cmd->add_option("--trace", o.trace, "Write the alternation trace as CSV");

    auto* walk_cmd = app.add_subcommand("walk", "Monte Carlo estimate of the harmonic extension");
    add_source_options(walk_cmd, o, false);
    walk_cmd->add_option("--data", o.data, "Boundary data file");
    walk_cmd->add_option("--start", o.start, "Start vertex")->required();
    walk_cmd->add_option("--walks", o.walks, "Number of walks");
    walk_cmd->add_option("--seed", o.seed, "Base seed");
    walk_cmd->add_option("--max-steps", o.max_steps, "Step budget per walk");

    std::vector<const char*> argv{"graph-potential"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    std::ostringstream buffer;
    try {
        int status = 0;
        if (*validate_cmd) status = cmd_validate(o, buffer);
        else if (*boundary_cmd) status = cmd_boundary(o, buffer);
        else if (*ends_cmd) status = cmd_ends(o, buffer, err);
        else if (*solve_cmd) status = cmd_solve(o, buffer, err);
        else if (*green_cmd) status = cmd_green(o, buffer);
        else if (*schwarz_cmd) status = cmd_schwarz(o, buffer);
        else if (*walk_cmd) status = cmd_walk(o, buffer, err);

        if (o.output.empty()) {
            out << buffer.str();
        } else {
            std::ofstream file(o.output);
            if (!file) throw InputError("cannot write output file " + o.output);
            file << buffer.str();
        }
        return status;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace gpot::cli
