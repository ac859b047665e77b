#include "dp/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "text_format.hpp"

namespace dp {

void Graph::add_edge(int u, int v) {
    if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("loop edge");
    if (u > v) std::swap(u, v);
    if (!multigraph) {
        for (const auto& e : edges)
            if (e.first == u && e.second == v)
                throw std::invalid_argument("duplicate edge in simple graph");
    }
    edges.emplace_back(u, v);
}

int Graph::degree(int u) const {
    int d = 0;
    for (const auto& e : edges) d += (e.first == u) + (e.second == u);
    return d;
}

int Graph::max_degree() const {
    std::vector<int> deg(n, 0);
    for (const auto& e : edges) {
        ++deg[e.first];
        ++deg[e.second];
    }
    int m = 0;
    for (int d : deg) m = std::max(m, d);
    return m;
}

std::vector<std::vector<int>> Graph::incidence() const {
    std::vector<std::vector<int>> inc(n);
    for (int e = 0; e < edge_count(); ++e) {
        inc[edges[e].first].push_back(e);
        inc[edges[e].second].push_back(e);
    }
    return inc;
}

namespace detail {

TokenLines tokenize_lines(const std::string& text) {
    TokenLines out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        out.emplace_back(lineno, std::move(toks));
    }
    return out;
}

int parse_int(const std::string& tok, int lineno, const char* what) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(lineno, std::string("expected ") + what + ", got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(lineno, std::string("expected ") + what + ", got '" + tok + "'");
    return v;
}

Graph parse_graph_tokens(const TokenLines& lines, size_t& pos) {
    if (pos >= lines.size()) throw ParseError(0, "missing graph header");
    const auto& [hline, htoks] = lines[pos];
    if (htoks.size() != 3 || (htoks[0] != "graph" && htoks[0] != "multigraph"))
        throw ParseError(hline, "expected 'graph <n> <m>' or 'multigraph <n> <m>'");
    int n = parse_int(htoks[1], hline, "vertex count");
    int m = parse_int(htoks[2], hline, "edge count");
    if (n < 0 || m < 0) throw ParseError(hline, "negative count in header");
    ++pos;

    Graph g(n, htoks[0] == "multigraph");
    std::set<std::pair<int, int>> seen;
    for (int e = 0; e < m; ++e) {
        if (pos >= lines.size())
            throw ParseError(lines.back().first, "expected " + std::to_string(m) +
                                                     " edge lines, got " + std::to_string(e));
        const auto& [lno, toks] = lines[pos];
        if (toks.size() != 2) throw ParseError(lno, "expected '<u> <v>'");
        int u = parse_int(toks[0], lno, "vertex index");
        int v = parse_int(toks[1], lno, "vertex index");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ParseError(lno, "vertex index out of range");
        if (u == v) throw ParseError(lno, "loop edge");
        auto key = std::minmax(u, v);
        if (!g.multigraph && !seen.insert({key.first, key.second}).second)
            throw ParseError(lno, "duplicate edge in simple graph");
        g.edges.emplace_back(key.first, key.second);
        ++pos;
    }
    return g;
}

}  // namespace detail

Graph parse_graph(const std::string& text) {
    auto lines = detail::tokenize_lines(text);
    size_t pos = 0;
    Graph g = detail::parse_graph_tokens(lines, pos);
    if (pos != lines.size())
        throw ParseError(lines[pos].first, "trailing content after edge list");
    return g;
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << (g.multigraph ? "multigraph " : "graph ") << g.n << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges) out << e.first << ' ' << e.second << '\n';
    return out.str();
}

namespace {

int shared_endpoints(const std::pair<int, int>& a, const std::pair<int, int>& b) {
    return (a.first == b.first) + (a.first == b.second) + (a.second == b.first) +
           (a.second == b.second);
}

}  // namespace

Graph line_graph(const Graph& g) {
    Graph lg(g.edge_count(), false);
    for (int e = 0; e < g.edge_count(); ++e)
        for (int h = e + 1; h < g.edge_count(); ++h)
            if (shared_endpoints(g.edges[e], g.edges[h]) > 0) lg.edges.emplace_back(e, h);
    return lg;
}

Graph line_multigraph(const Graph& g) {
    Graph lg(g.edge_count(), true);
    for (int e = 0; e < g.edge_count(); ++e)
        for (int h = e + 1; h < g.edge_count(); ++h) {
            int s = shared_endpoints(g.edges[e], g.edges[h]);
            if (s >= 1) lg.edges.emplace_back(e, h);
            if (s == 2) lg.edges.emplace_back(e, h);
        }
    return lg;
}

DegeneracyResult degeneracy(const Graph& g) {
    std::vector<int> deg(g.n, 0);
    std::vector<std::vector<int>> adj(g.n);  // parallel edges appear once per copy
    for (const auto& e : g.edges) {
        ++deg[e.first];
        ++deg[e.second];
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::vector<bool> alive(g.n, true);
    DegeneracyResult res;
    for (int step = 0; step < g.n; ++step) {
        int u = -1;
        for (int v = 0; v < g.n; ++v)
            if (alive[v] && (u < 0 || deg[v] < deg[u])) u = v;
        res.degeneracy = std::max(res.degeneracy, deg[u]);
        res.ordering.push_back(u);
        alive[u] = false;
        for (int w : adj[u])
            if (alive[w]) --deg[w];
    }
    return res;
}

std::optional<std::vector<int>> bipartition(const Graph& g) {
    std::vector<std::vector<int>> adj(g.n);
    for (const auto& e : g.edges) {
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::vector<int> color(g.n, -1);
    std::vector<int> queue;
    for (int s = 0; s < g.n; ++s) {
        if (color[s] >= 0) continue;
        color[s] = 0;
        queue.assign(1, s);
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            for (int w : adj[u]) {
                if (color[w] < 0) {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else if (color[w] == color[u]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

bool is_proper_edge_coloring(const Graph& g, const EdgeColoring& c) {
    if (static_cast<int>(c.colors.size()) != g.edge_count()) return false;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (c.colors[e] < 0 || c.colors[e] >= c.num_colors) return false;
        for (int h = e + 1; h < g.edge_count(); ++h)
            if (c.colors[e] == c.colors[h] && shared_endpoints(g.edges[e], g.edges[h]) > 0)
                return false;
    }
    return true;
}

EdgeColoringEnumerator::EdgeColoringEnumerator(const Graph& g, int num_colors)
    : g_(g), d_(num_colors), earlier_(g.edge_count()), colors_(g.edge_count(), -1) {
    if (d_ < g.max_degree()) throw std::invalid_argument("palette smaller than max degree");
    for (int e = 0; e < g.edge_count(); ++e)
        for (int h = 0; h < e; ++h)
            if (shared_endpoints(g.edges[e], g.edges[h]) > 0) earlier_[e].push_back(h);
}

// Finds the lexicographically next proper completion with colors_[pos..] open.
bool EdgeColoringEnumerator::advance_from(int pos) {
    int m = g_.edge_count();
    while (pos >= 0) {
        bool moved = false;
        for (int c = colors_[pos] + 1; c < d_; ++c) {
            bool ok = true;
            for (int h : earlier_[pos])
                if (colors_[h] == c) {
                    ok = false;
                    break;
                }
            if (ok) {
                colors_[pos] = c;
                moved = true;
                break;
            }
        }
        if (!moved) {
            colors_[pos] = -1;
            --pos;  // backtrack
            continue;
        }
        if (pos == m - 1) return true;
        ++pos;
    }
    return false;
}

bool EdgeColoringEnumerator::next(EdgeColoring& out) {
    if (exhausted_) return false;
    int m = g_.edge_count();
    if (m == 0) {
        exhausted_ = true;
        if (started_) return false;
        started_ = true;
        out.colors.clear();
        out.num_colors = d_;
        return true;
    }
    bool found = started_ ? advance_from(m - 1) : advance_from(0);
    started_ = true;
    if (!found) {
        exhausted_ = true;
        return false;
    }
    out.colors = colors_;
    out.num_colors = d_;
    return true;
}

std::optional<int> chromatic_index_exact(const Graph& g, int max_colors) {
    int m = g.edge_count();
    if (m == 0) return 0;
    int lo = g.max_degree();
    if (max_colors < lo) return std::nullopt;

    // Static most-constrained-first order: descending endpoint degree sum, then id.
    std::vector<int> deg(g.n, 0);
    for (const auto& e : g.edges) {
        ++deg[e.first];
        ++deg[e.second];
    }
    std::vector<int> order(m);
    for (int e = 0; e < m; ++e) order[e] = e;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        int sa = deg[g.edges[a].first] + deg[g.edges[a].second];
        int sb = deg[g.edges[b].first] + deg[g.edges[b].second];
        if (sa != sb) return sa > sb;
        return a < b;
    });
    std::vector<std::vector<int>> earlier(m);  // positions in `order`
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j)
            if (shared_endpoints(g.edges[order[i]], g.edges[order[j]]) > 0)
                earlier[i].push_back(j);

    for (int d = lo; d <= max_colors; ++d) {
        std::vector<int> col(m, -1);
        // Color c on edge i is only tried when c <= 1 + max color used before it;
        // palette relabeling makes larger first uses redundant.
        std::vector<int> maxused(m + 1, -1);
        int i = 0;
        bool found = false;
        while (true) {
            if (i == m) {
                found = true;
                break;
            }
            int cap = std::min(d - 1, maxused[i] + 1);
            bool moved = false;
            for (int c = col[i] + 1; c <= cap; ++c) {
                bool ok = true;
                for (int j : earlier[i])
                    if (col[j] == c) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    col[i] = c;
                    maxused[i + 1] = std::max(maxused[i], c);
                    moved = true;
                    break;
                }
            }
            if (moved) {
                ++i;
            } else {
                col[i] = -1;
                if (--i < 0) break;
            }
        }
        if (found) return d;
    }
    return std::nullopt;
}

Graph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
    Graph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph path_graph(int n) {
    if (n < 1) throw std::invalid_argument("path needs n >= 1");
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph complete_graph(int k) {
    Graph g(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) g.add_edge(i, j);
    return g;
}

Graph complete_bipartite_graph(int a, int b) {
    Graph g(a + b);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) g.add_edge(i, a + j);
    return g;
}

Graph petersen_graph() {
    Graph g(10);
    for (int i = 0; i < 5; ++i) g.add_edge(i, (i + 1) % 5);          // outer cycle
    for (int i = 0; i < 5; ++i) g.add_edge(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    for (int i = 0; i < 5; ++i) g.add_edge(i, 5 + i);                // spokes
    return g;
}

Graph complete_multigraph(int k, int t) {
    if (k < 1 || t < 1) throw std::invalid_argument("complete_multigraph needs k,t >= 1");
    Graph g(k, true);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            for (int r = 0; r < t; ++r) g.add_edge(i, j);
    return g;
}

}  // namespace dp
