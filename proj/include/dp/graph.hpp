#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dp {

// Thrown by the file parsers; line is 1-based in the original text.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Vertices are dense indices 0..n-1. Edge ids are positions in `edges`,
// stable in input order. Endpoints are stored normalized (first < second).
// A multigraph may repeat endpoint pairs; loops are never allowed.
struct Graph {
    int n = 0;
    bool multigraph = false;
    std::vector<std::pair<int, int>> edges;

    Graph() = default;
    explicit Graph(int vertices, bool multi = false) : n(vertices), multigraph(multi) {}

    int edge_count() const { return static_cast<int>(edges.size()); }

    // Validates range, loop and (for simple graphs) duplicate constraints.
    void add_edge(int u, int v);

    int degree(int u) const;
    int max_degree() const;

    // For each vertex, incident edge ids in ascending order.
    std::vector<std::vector<int>> incidence() const;
};

Graph parse_graph(const std::string& text);
std::string serialize_graph(const Graph& g);

// Vertices of Line(G): edge ids of G; adjacent iff the edges share an endpoint.
Graph line_graph(const Graph& g);
// Like line_graph, but edges sharing both endpoints yield two parallel edges.
Graph line_multigraph(const Graph& g);

struct DegeneracyResult {
    int degeneracy = 0;
    std::vector<int> ordering;  // peel order; each vertex has <= d neighbors later
};
DegeneracyResult degeneracy(const Graph& g);

// Two-coloring with no monochromatic edge, or nullopt if an odd cycle exists.
std::optional<std::vector<int>> bipartition(const Graph& g);

// Proper assignment of colors 0..num_colors-1 to edge ids.
struct EdgeColoring {
    std::vector<int> colors;
    int num_colors = 0;
};

bool is_proper_edge_coloring(const Graph& g, const EdgeColoring& c);

// Streams every proper edge coloring with the given palette, in lexicographic
// order of the color vector (edge id order, colors ascending).
class EdgeColoringEnumerator {
public:
    EdgeColoringEnumerator(const Graph& g, int num_colors);
    bool next(EdgeColoring& out);

private:
    const Graph& g_;
    int d_;
    std::vector<std::vector<int>> earlier_;  // edge id -> earlier edges sharing an endpoint
    std::vector<int> colors_;
    bool exhausted_ = false;
    bool started_ = false;

    bool advance_from(int pos);
};

// Smallest d <= max_colors admitting a proper edge coloring, or nullopt.
std::optional<int> chromatic_index_exact(const Graph& g, int max_colors);

// Generators. All named graphs used in tests come from here, never from files.
Graph cycle_graph(int n);
Graph path_graph(int n);
Graph complete_graph(int k);
Graph complete_bipartite_graph(int a, int b);
Graph petersen_graph();
// K^t_k: complete graph on k vertices with every edge replaced by t parallel edges.
Graph complete_multigraph(int k, int t);

}  // namespace dp
