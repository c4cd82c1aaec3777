#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gpot/error.hpp"
#include "gpot/format.hpp"
#include "gpot/graph.hpp"
#include "line_reader.hpp"

namespace gpot {

WeightedGraph parse_graph(std::istream& in, std::string_view source) {
    GraphBuilder builder;
    LineReader reader(in, source);
    std::vector<std::string> tokens;
    while (reader.next(tokens)) {
        if (tokens[0] != "edge") reader.fail("unknown directive '" + tokens[0] + "'");
        if (tokens.size() != 4) reader.fail("expected: edge <from> <to> <weight>");
        double w = reader.parse_real(tokens[3]);
        try {
            builder.add_edge(tokens[1], tokens[2], w);
        } catch (const InputError& e) {
            reader.fail(e.what());
        }
    }
    return std::move(builder).build();
}

WeightedGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file " + path.string());
    return parse_graph(in, path.string());
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
    for (VertexIndex v = 0; v < g.size(); ++v)
        for (const Entry& e : g.row(v))
            out << "edge " << g.name(v) << ' ' << g.name(e.target) << ' ' << format_real(e.weight) << '\n';
}

}  // namespace gpot
