#include "dp/cover.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "text_format.hpp"

namespace dp {

void Cover::add_cross(int u, int ui, int v, int vi) {
    if (u == v) throw std::invalid_argument("cross edge inside a class");
    if (u > v) {
        std::swap(u, v);
        std::swap(ui, vi);
    }
    cross.push_back({u, ui, v, vi});
}

void Cover::canonicalize() {
    std::sort(cross.begin(), cross.end());
    cross.erase(std::unique(cross.begin(), cross.end()), cross.end());
}

bool Cover::is_k_fold(int k) const {
    for (int s : sizes)
        if (s != k) return false;
    return true;
}

bool is_valid_transversal(const Cover& cov, const Transversal& t) {
    if (static_cast<int>(t.picks.size()) != cov.base.n) return false;
    for (int u = 0; u < cov.base.n; ++u)
        if (t.picks[u] < 0 || t.picks[u] >= cov.sizes[u]) return false;
    for (const auto& ce : cov.cross)
        if (t.picks[ce.u] == ce.ui && t.picks[ce.v] == ce.vi) return false;
    return true;
}

namespace {

// Multiplicity of each endpoint pair in the base graph.
std::map<std::pair<int, int>, int> pair_multiplicity(const Graph& g) {
    std::map<std::pair<int, int>, int> mult;
    for (const auto& e : g.edges) ++mult[e];
    return mult;
}

}  // namespace

std::string describe(const CoverViolation& v, const Cover&) {
    std::ostringstream out;
    const auto& w = v.witness;
    switch (v.condition) {
        case CoverCondition::CrossBetweenNonAdjacent:
            out << "C3 violation: xedge " << w.u << ' ' << w.ui << ' ' << w.v << ' ' << w.vi
                << " joins classes of non-adjacent vertices";
            break;
        case CoverCondition::MatchingExceeded:
            out << "C4 violation: xedge " << w.u << ' ' << w.ui << ' ' << w.v << ' ' << w.vi
                << " exceeds the matching bound for its vertex pair";
            break;
        case CoverCondition::SlotOutOfRange:
            out << "slot-range violation: xedge " << w.u << ' ' << w.ui << ' ' << w.v << ' '
                << w.vi;
            break;
    }
    return out.str();
}

ValidationReport validate_cover(const Cover& cov) {
    ValidationReport report;
    if (static_cast<int>(cov.sizes.size()) != cov.base.n)
        throw std::invalid_argument("sizes length does not match vertex count");
    for (int u = 0; u < cov.base.n; ++u)
        if (cov.sizes[u] == 0) report.empty_classes.push_back(u);

    auto mult = pair_multiplicity(cov.base);

    Cover sorted = cov;
    sorted.canonicalize();
    // Per (u,v) pair, per-slot degrees on both sides; C4/C4' caps them at the
    // number of parallel base edges.
    std::map<std::pair<int, int>, std::pair<std::vector<int>, std::vector<int>>> degrees;
    for (const auto& ce : sorted.cross) {
        bool in_range = ce.u >= 0 && ce.u < cov.base.n && ce.v >= 0 && ce.v < cov.base.n &&
                        ce.u < ce.v && ce.ui >= 0 && ce.ui < cov.sizes[ce.u] && ce.vi >= 0 &&
                        ce.vi < cov.sizes[ce.v];
        if (!in_range) {
            report.violations.push_back({CoverCondition::SlotOutOfRange, ce});
            continue;
        }
        auto it = mult.find({ce.u, ce.v});
        if (it == mult.end()) {
            report.violations.push_back({CoverCondition::CrossBetweenNonAdjacent, ce});
            continue;
        }
        int t = it->second;
        auto& [du, dv] = degrees[{ce.u, ce.v}];
        du.resize(cov.sizes[ce.u], 0);
        dv.resize(cov.sizes[ce.v], 0);
        if (++du[ce.ui] > t || ++dv[ce.vi] > t)
            report.violations.push_back({CoverCondition::MatchingExceeded, ce});
    }
    return report;
}

Cover cover_from_lists(const Graph& g, const ListAssignment& assignment) {
    if (g.multigraph) throw std::invalid_argument("cover_from_lists needs a simple base");
    if (static_cast<int>(assignment.lists.size()) != g.n)
        throw std::invalid_argument("one list per vertex required");
    Cover cov;
    cov.base = g;
    std::vector<std::vector<int>> sorted_lists(g.n);
    for (int u = 0; u < g.n; ++u) {
        sorted_lists[u] = assignment.lists[u];
        std::sort(sorted_lists[u].begin(), sorted_lists[u].end());
        sorted_lists[u].erase(std::unique(sorted_lists[u].begin(), sorted_lists[u].end()),
                              sorted_lists[u].end());
        cov.sizes.push_back(static_cast<int>(sorted_lists[u].size()));
    }
    for (const auto& [u, v] : g.edges)
        for (int i = 0; i < cov.sizes[u]; ++i)
            for (int j = 0; j < cov.sizes[v]; ++j)
                if (sorted_lists[u][i] == sorted_lists[v][j]) cov.add_cross(u, i, v, j);
    cov.canonicalize();
    return cov;
}

Cover full_cover(const Graph& g, int k, const std::vector<std::vector<int>>& perms) {
    if (static_cast<int>(perms.size()) != g.edge_count())
        throw std::invalid_argument("one permutation per edge required");
    Cover cov;
    cov.base = g;
    cov.sizes.assign(g.n, k);
    for (int e = 0; e < g.edge_count(); ++e) {
        if (static_cast<int>(perms[e].size()) != k)
            throw std::invalid_argument("permutation arity mismatch");
        auto [u, v] = g.edges[e];
        for (int i = 0; i < k; ++i) cov.add_cross(u, i, v, perms[e][i]);
    }
    cov.canonicalize();
    return cov;
}

std::pair<std::vector<int>, std::vector<int>> spanning_forest_split(const Graph& g) {
    std::vector<int> parent(g.n);
    for (int i = 0; i < g.n; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<int> forest, free;
    for (int e = 0; e < g.edge_count(); ++e) {
        int ru = find(g.edges[e].first), rv = find(g.edges[e].second);
        if (ru != rv) {
            parent[ru] = rv;
            forest.push_back(e);
        } else {
            free.push_back(e);
        }
    }
    return {forest, free};
}

namespace {

// Perfect matching inside one pair's cross edges, as a u-slot -> v-slot map.
// Augmenting-path search; returns empty vector if none exists.
std::vector<int> pair_perfect_matching(int k, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(k);
    for (auto [i, j] : edges) adj[i].push_back(j);
    std::vector<int> match_v(k, -1);  // v-slot -> u-slot
    std::vector<bool> seen(k);
    std::function<bool(int)> augment = [&](int u) {
        for (int j : adj[u]) {
            if (seen[j]) continue;
            seen[j] = true;
            if (match_v[j] < 0 || augment(match_v[j])) {
                match_v[j] = u;
                return true;
            }
        }
        return false;
    };
    for (int u = 0; u < k; ++u) {
        seen.assign(k, false);
        if (!augment(u)) return {};
    }
    std::vector<int> perm(k);
    for (int j = 0; j < k; ++j) perm[match_v[j]] = j;
    return perm;
}

}  // namespace

Cover normalize_cover(const Cover& cov) {
    if (cov.base.n == 0) return cov;
    int k = cov.sizes.empty() ? 0 : cov.sizes[0];
    if (k <= 0 || !cov.is_k_fold(k)) throw std::invalid_argument("cover is not full k-fold");

    // Group cross edges by vertex pair.
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> pair_cross;
    for (const auto& ce : cov.cross) pair_cross[{ce.u, ce.v}].emplace_back(ce.ui, ce.vi);

    auto mult = pair_multiplicity(cov.base);
    for (const auto& [pr, t] : mult) {
        auto it = pair_cross.find(pr);
        if (it == pair_cross.end()) throw std::invalid_argument("cover is not full k-fold");
        if (!cov.base.multigraph && static_cast<int>(it->second.size()) != k)
            throw std::invalid_argument("cover is not full k-fold");
    }

    auto [forest, free] = spanning_forest_split(cov.base);

    // Walk each tree from its smallest vertex; relabel[u] maps old slot -> new.
    std::vector<std::vector<int>> relabel(cov.base.n);
    std::vector<std::vector<std::pair<int, int>>> tree_adj(cov.base.n);  // (neighbor, edge id)
    for (int e : forest) {
        tree_adj[cov.base.edges[e].first].emplace_back(cov.base.edges[e].second, e);
        tree_adj[cov.base.edges[e].second].emplace_back(cov.base.edges[e].first, e);
    }
    std::vector<int> identity(k);
    for (int i = 0; i < k; ++i) identity[i] = i;
    std::vector<bool> placed(cov.base.n, false);
    for (int root = 0; root < cov.base.n; ++root) {
        if (placed[root]) continue;
        placed[root] = true;
        relabel[root] = identity;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            for (auto [w, e] : tree_adj[p]) {
                if (placed[w]) continue;
                placed[w] = true;
                int u = cov.base.edges[e].first, v = cov.base.edges[e].second;
                auto& edges_uv = pair_cross.at({u, v});
                std::vector<int> pi = pair_perfect_matching(k, edges_uv);
                if (pi.empty()) throw std::invalid_argument("cover is not full k-fold");
                // pi maps u-slots to v-slots; orient it placed -> new and solve
                // relabel[w](pi(i)) = relabel[p](i).
                relabel[w].assign(k, 0);
                if (p == u) {
                    for (int i = 0; i < k; ++i) relabel[w][pi[i]] = relabel[p][i];
                } else {
                    for (int i = 0; i < k; ++i) relabel[w][i] = relabel[p][pi[i]];
                }
                stack.push_back(w);
            }
        }
    }

    Cover out;
    out.base = cov.base;
    out.sizes = cov.sizes;
    for (const auto& ce : cov.cross)
        out.cross.push_back({ce.u, relabel[ce.u][ce.ui], ce.v, relabel[ce.v][ce.vi]});
    out.canonicalize();
    return out;
}

Cover random_cover(const Graph& g, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("fold must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> perms(g.edge_count());
    for (auto& p : perms) {
        p.resize(k);
        for (int i = 0; i < k; ++i) p[i] = i;
        // Fisher-Yates with explicit indexing: identical bytes on every platform.
        for (int i = k - 1; i > 0; --i) {
            int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(p[i], p[j]);
        }
    }
    return full_cover(g, k, perms);
}

std::string serialize_cover(const Cover& cov) {
    Cover canonical = cov;
    canonical.canonicalize();
    std::ostringstream out;
    out << "dpcover 1\n";
    out << serialize_graph(cov.base);
    out << "sizes";
    for (int s : cov.sizes) out << ' ' << s;
    out << '\n';
    for (const auto& ce : canonical.cross)
        out << "xedge " << ce.u << ' ' << ce.ui << ' ' << ce.v << ' ' << ce.vi << '\n';
    return out.str();
}

Cover parse_cover(const std::string& text) {
    auto lines = detail::tokenize_lines(text);
    if (lines.empty()) throw ParseError(0, "empty cover file");
    size_t pos = 0;
    {
        const auto& [lno, toks] = lines[pos];
        if (toks.size() != 2 || toks[0] != "dpcover" || toks[1] != "1")
            throw ParseError(lno, "expected 'dpcover 1' header");
        ++pos;
    }
    Cover cov;
    cov.base = detail::parse_graph_tokens(lines, pos);
    {
        if (pos >= lines.size()) throw ParseError(lines.back().first, "missing 'sizes' line");
        const auto& [lno, toks] = lines[pos];
        if (toks.empty() || toks[0] != "sizes")
            throw ParseError(lno, "expected 'sizes <s_0> ... <s_{n-1}>'");
        if (static_cast<int>(toks.size()) != cov.base.n + 1)
            throw ParseError(lno, "sizes line must list exactly " + std::to_string(cov.base.n) +
                                      " class sizes");
        for (int u = 0; u < cov.base.n; ++u) {
            int s = detail::parse_int(toks[u + 1], lno, "class size");
            if (s < 0) throw ParseError(lno, "negative class size");
            cov.sizes.push_back(s);
        }
        ++pos;
    }
    for (; pos < lines.size(); ++pos) {
        const auto& [lno, toks] = lines[pos];
        if (toks.size() != 5 || toks[0] != "xedge")
            throw ParseError(lno, "expected 'xedge <u> <i> <v> <j>'");
        int u = detail::parse_int(toks[1], lno, "vertex index");
        int i = detail::parse_int(toks[2], lno, "slot index");
        int v = detail::parse_int(toks[3], lno, "vertex index");
        int j = detail::parse_int(toks[4], lno, "slot index");
        if (u < 0 || u >= cov.base.n || v < 0 || v >= cov.base.n)
            throw ParseError(lno, "vertex index out of range");
        if (u >= v) throw ParseError(lno, "xedge requires u < v");
        cov.cross.push_back({u, i, v, j});
    }
    cov.canonicalize();
    ValidationReport report = validate_cover(cov);
    if (!report.ok()) {
        std::string what = "invalid cover: " + describe(report.violations.front(), cov);
        throw CoverValidationError(what, std::move(report));
    }
    return cov;
}

std::uint64_t factorial_saturated(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) {
        if (f > UINT64_MAX / static_cast<std::uint64_t>(i)) return UINT64_MAX;
        f *= static_cast<std::uint64_t>(i);
    }
    return f;
}

std::vector<int> unrank_permutation(int k, std::uint64_t rank) {
    // Factorial number system; rank 0 is the identity, order lexicographic.
    std::vector<int> avail(k);
    for (int i = 0; i < k; ++i) avail[i] = i;
    std::vector<std::uint64_t> fact(k, 1);
    for (int i = 1; i < k; ++i) fact[i] = fact[i - 1] * static_cast<std::uint64_t>(i);
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) {
        std::uint64_t f = fact[k - 1 - i];
        int idx = static_cast<int>(rank / f);
        rank %= f;
        perm[i] = avail[idx];
        avail.erase(avail.begin() + idx);
    }
    return perm;
}

std::uint64_t rank_permutation(const std::vector<int>& perm) {
    int k = static_cast<int>(perm.size());
    std::vector<std::uint64_t> fact(std::max(k, 1), 1);
    for (int i = 1; i < k; ++i) fact[i] = fact[i - 1] * static_cast<std::uint64_t>(i);
    std::vector<int> avail;
    for (int i = 0; i < k; ++i) avail.push_back(i);
    std::uint64_t rank = 0;
    for (int i = 0; i < k; ++i) {
        auto it = std::find(avail.begin(), avail.end(), perm[i]);
        rank += static_cast<std::uint64_t>(it - avail.begin()) * fact[k - 1 - i];
        avail.erase(it);
    }
    return rank;
}

std::uint64_t CoverEnumeration::count() const {
    std::uint64_t radix = factorial_saturated(k);
    std::uint64_t total = 1;
    for (size_t i = 0; i < free_edges.size(); ++i) {
        if (radix != 0 && total > UINT64_MAX / radix) return UINT64_MAX;
        total *= radix;
    }
    return total;
}

std::vector<std::uint64_t> CoverEnumeration::digits_at(std::uint64_t cursor) const {
    std::uint64_t radix = factorial_saturated(k);
    std::vector<std::uint64_t> digits(free_edges.size(), 0);
    for (size_t i = free_edges.size(); i-- > 0;) {
        digits[i] = cursor % radix;
        cursor /= radix;
    }
    return digits;
}

Cover CoverEnumeration::cover_at(std::uint64_t cursor) const {
    auto digits = digits_at(cursor);
    std::vector<std::vector<int>> perms(base.edge_count());
    std::vector<int> identity(k);
    for (int i = 0; i < k; ++i) identity[i] = i;
    for (int e : forest_edges) perms[e] = identity;
    for (size_t i = 0; i < free_edges.size(); ++i)
        perms[free_edges[i]] = unrank_permutation(k, digits[i]);
    return full_cover(base, k, perms);
}

CoverEnumeration enumerate_full_covers(const Graph& g, int k) {
    if (k < 1) throw std::invalid_argument("fold must be >= 1");
    CoverEnumeration en;
    en.base = g;
    en.k = k;
    std::tie(en.forest_edges, en.free_edges) = spanning_forest_split(g);
    return en;
}

}  // namespace dp
