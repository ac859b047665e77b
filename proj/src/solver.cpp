#include "dp/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dp {

namespace {

constexpr int kMaxClassSize = 64;  // alive sets are uint64_t bitmasks

struct HostIndex {
    std::vector<int> offset;                            // class -> first host node
    std::vector<std::vector<std::pair<int, int>>> adj;  // host node -> (class, slot)
};

HostIndex build_host_index(const Cover& cov) {
    HostIndex idx;
    idx.offset.assign(cov.base.n + 1, 0);
    for (int u = 0; u < cov.base.n; ++u) {
        if (cov.sizes[u] > kMaxClassSize)
            throw std::invalid_argument("class size above 64 is not supported");
        idx.offset[u + 1] = idx.offset[u] + cov.sizes[u];
    }
    idx.adj.resize(idx.offset[cov.base.n]);
    for (const auto& ce : cov.cross) {
        idx.adj[idx.offset[ce.u] + ce.ui].emplace_back(ce.v, ce.vi);
        idx.adj[idx.offset[ce.v] + ce.vi].emplace_back(ce.u, ce.ui);
    }
    return idx;
}

// One backtracking engine for finding and counting. When counting, the search
// keeps going after each complete transversal.
struct TransversalSearch {
    const Cover& cov;
    HostIndex idx;
    std::vector<std::uint64_t> alive;
    std::vector<int> picked;
    std::uint64_t nodes = 0;
    std::uint64_t completions = 0;
    bool count_all = false;
    std::optional<Transversal> witness;

    explicit TransversalSearch(const Cover& c) : cov(c), idx(build_host_index(c)) {
        alive.resize(cov.base.n);
        picked.assign(cov.base.n, -1);
        for (int u = 0; u < cov.base.n; ++u)
            alive[u] = cov.sizes[u] == 64 ? ~0ull : ((1ull << cov.sizes[u]) - 1);
    }

    int pick_class() const {
        int best = -1, best_count = kMaxClassSize + 1;
        for (int u = 0; u < cov.base.n; ++u) {
            if (picked[u] >= 0) continue;
            int c = std::popcount(alive[u]);
            if (c < best_count) {
                best = u;
                best_count = c;
            }
        }
        return best;
    }

    bool dfs() {
        int u = pick_class();
        if (u < 0) {
            ++completions;
            if (!witness) {
                Transversal t;
                t.picks.assign(picked.begin(), picked.end());
                witness = std::move(t);
            }
            return !count_all;
        }
        std::uint64_t candidates = alive[u];
        while (candidates) {
            int i = std::countr_zero(candidates);
            candidates &= candidates - 1;
            ++nodes;
            picked[u] = i;
            bool ok = true;
            std::vector<std::pair<int, int>> removed;
            for (const auto& [v, j] : idx.adj[idx.offset[u] + i]) {
                if (picked[v] >= 0) continue;
                std::uint64_t bit = 1ull << j;
                if (alive[v] & bit) {
                    alive[v] &= ~bit;
                    removed.emplace_back(v, j);
                    if (alive[v] == 0) ok = false;
                }
            }
            if (ok && dfs()) return true;
            for (const auto& [v, j] : removed) alive[v] |= 1ull << j;
            picked[u] = -1;
        }
        return false;
    }
};

}  // namespace

std::optional<Transversal> find_transversal(const Cover& cov, SolveStats& stats) {
    TransversalSearch search(cov);
    search.dfs();
    stats.nodes = search.nodes;
    stats.colorable = search.witness.has_value();
    stats.witness = search.witness;
    return search.witness;
}

std::optional<Transversal> find_transversal(const Cover& cov) {
    SolveStats stats;
    return find_transversal(cov, stats);
}

std::uint64_t count_transversals(const Cover& cov) {
    TransversalSearch search(cov);
    search.count_all = true;
    search.dfs();
    return search.completions;
}

std::optional<Transversal> greedy_transversal(const Cover& cov, const std::vector<int>& ordering) {
    std::vector<bool> seen(cov.base.n, false);
    for (int u : ordering) {
        if (u < 0 || u >= cov.base.n || seen[u])
            throw std::invalid_argument("ordering must be a permutation of the vertices");
        seen[u] = true;
    }
    if (static_cast<int>(ordering.size()) != cov.base.n)
        throw std::invalid_argument("ordering must be a permutation of the vertices");
    std::vector<int> picked(cov.base.n, -1);
    Transversal t;
    t.picks.assign(cov.base.n, -1);
    for (auto it = ordering.rbegin(); it != ordering.rend(); ++it) {
        int u = *it;
        std::uint64_t forbidden = 0;
        for (const auto& ce : cov.cross) {
            if (ce.u == u && picked[ce.v] == ce.vi) forbidden |= 1ull << ce.ui;
            if (ce.v == u && picked[ce.u] == ce.ui) forbidden |= 1ull << ce.vi;
        }
        std::uint64_t allowed =
            (cov.sizes[u] == 64 ? ~0ull : ((1ull << cov.sizes[u]) - 1)) & ~forbidden;
        if (!allowed) return std::nullopt;
        picked[u] = std::countr_zero(allowed);
        t.picks[u] = picked[u];
    }
    return t;
}

UnitPropagation unit_propagate(const Cover& cov) {
    HostIndex idx = build_host_index(cov);
    UnitPropagation result;
    std::vector<std::uint64_t> alive(cov.base.n);
    for (int u = 0; u < cov.base.n; ++u)
        alive[u] = cov.sizes[u] == 64 ? ~0ull : ((1ull << cov.sizes[u]) - 1);
    std::vector<bool> processed(cov.base.n, false);
    bool progress = true;
    while (progress) {
        progress = false;
        for (int u = 0; u < cov.base.n; ++u) {
            if (processed[u] || std::popcount(alive[u]) != 1) continue;
            processed[u] = true;
            progress = true;
            int i = std::countr_zero(alive[u]);
            for (const auto& [v, j] : idx.adj[idx.offset[u] + i]) alive[v] &= ~(1ull << j);
        }
        if (std::any_of(alive.begin(), alive.end(),
                        [&](std::uint64_t m) { return m == 0; })) {
            // only a contradiction when the class was nonempty to begin with
            for (int u = 0; u < cov.base.n; ++u)
                if (alive[u] == 0 && cov.sizes[u] > 0) result.contradiction = true;
            if (result.contradiction) break;
        }
    }
    result.alive.resize(cov.base.n);
    for (int u = 0; u < cov.base.n; ++u)
        for (int i = 0; i < cov.sizes[u]; ++i)
            if (alive[u] >> i & 1) result.alive[u].push_back(i);
    return result;
}

BudgetExceeded::BudgetExceeded(int k, std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("enumeration budget exceeded at fold " + std::to_string(k) + ": " +
                         std::to_string(required) + " covers > budget " + std::to_string(budget)),
      k_(k),
      required_(required) {}

namespace {

// ---- cover-scan kernel -----------------------------------------------------
//
// A cover in the enumeration is determined by one permutation digit per free
// edge. The kernel walks cursors odometer-style and keeps, per base vertex
// pair, a table of forbidden-slot masks, so the per-cover existence check is
// a small backtracking over base vertices with bitmask lookups only.

constexpr int kPermTableMaxK = 8;  // k! * k bytes precomputed below this

struct ScanPair {
    int u, v;
    std::vector<int> digit_of_edge;  // digit index per parallel edge, -1 = pinned identity
};

struct ScanContext {
    const CoverEnumeration& en;
    int n, k;
    std::uint64_t radix;
    std::vector<ScanPair> pairs;
    std::vector<std::vector<int>> earlier;  // vertex w -> pair ids with v == w
    std::vector<int> pair_of_digit;
    std::vector<std::uint8_t> perm_table;  // flattened k! x k, when k small

    explicit ScanContext(const CoverEnumeration& enumeration)
        : en(enumeration), n(enumeration.base.n), k(enumeration.k) {
        radix = factorial_saturated(k);
        std::map<std::pair<int, int>, int> pair_id;
        std::vector<int> digit_of(en.base.edge_count(), -1);
        for (size_t d = 0; d < en.free_edges.size(); ++d) digit_of[en.free_edges[d]] = (int)d;
        for (int e = 0; e < en.base.edge_count(); ++e) {
            auto key = en.base.edges[e];
            auto [it, inserted] = pair_id.try_emplace(key, (int)pairs.size());
            if (inserted) pairs.push_back({key.first, key.second, {}});
            pairs[it->second].digit_of_edge.push_back(digit_of[e]);
        }
        earlier.resize(n);
        for (size_t p = 0; p < pairs.size(); ++p) earlier[pairs[p].v].push_back((int)p);
        pair_of_digit.resize(en.free_edges.size());
        for (size_t p = 0; p < pairs.size(); ++p)
            for (int d : pairs[p].digit_of_edge)
                if (d >= 0) pair_of_digit[d] = (int)p;
        if (k <= kPermTableMaxK) {
            perm_table.resize(radix * k);
            for (std::uint64_t r = 0; r < radix; ++r) {
                auto perm = unrank_permutation(k, r);
                for (int i = 0; i < k; ++i) perm_table[r * k + i] = (std::uint8_t)perm[i];
            }
        }
    }
};

struct ScanState {
    const ScanContext& ctx;
    std::vector<std::uint64_t> digits;
    std::vector<std::uint64_t> forbidden;  // pairs x k, flattened
    std::vector<std::uint64_t> rem;        // scratch for the existence check
    std::vector<int> pick;
    std::vector<int> scratch_perm;

    explicit ScanState(const ScanContext& c)
        : ctx(c),
          digits(c.en.free_edges.size(), 0),
          forbidden(c.pairs.size() * c.k, 0),
          rem(c.n, 0),
          pick(c.n, 0),
          scratch_perm(c.k) {}

    void apply_perm(std::uint64_t rank, std::uint64_t* masks) {
        if (!ctx.perm_table.empty()) {
            const std::uint8_t* p = &ctx.perm_table[rank * ctx.k];
            for (int i = 0; i < ctx.k; ++i) masks[i] |= 1ull << p[i];
        } else {
            auto perm = unrank_permutation(ctx.k, rank);
            for (int i = 0; i < ctx.k; ++i) masks[i] |= 1ull << perm[i];
        }
    }

    void rebuild_pair(int p) {
        std::uint64_t* masks = &forbidden[(size_t)p * ctx.k];
        std::fill(masks, masks + ctx.k, 0);
        for (int d : ctx.pairs[p].digit_of_edge) {
            if (d < 0) {
                for (int i = 0; i < ctx.k; ++i) masks[i] |= 1ull << i;  // pinned identity
            } else {
                apply_perm(digits[d], masks);
            }
        }
    }

    void seek(std::uint64_t cursor) {
        digits = ctx.en.digits_at(cursor);
        for (size_t p = 0; p < ctx.pairs.size(); ++p) rebuild_pair((int)p);
    }

    void advance() {
        for (size_t i = digits.size(); i-- > 0;) {
            if (++digits[i] < ctx.radix) {
                rebuild_pair(ctx.pair_of_digit[i]);
                return;
            }
            digits[i] = 0;
            rebuild_pair(ctx.pair_of_digit[i]);
        }
    }

    bool colorable() {
        if (ctx.n == 0) return true;
        const std::uint64_t full = ctx.k == 64 ? ~0ull : ((1ull << ctx.k) - 1);
        int w = 0;
        rem[0] = full;
        while (true) {
            if (rem[w] == 0) {
                if (w == 0) return false;
                --w;
                continue;
            }
            pick[w] = std::countr_zero(rem[w]);
            rem[w] &= rem[w] - 1;
            if (w == ctx.n - 1) return true;
            std::uint64_t a = full;
            for (int p : ctx.earlier[w + 1])
                a &= ~forbidden[(size_t)p * ctx.k + pick[ctx.pairs[p].u]];
            rem[w + 1] = a;
            ++w;
        }
    }
};

}  // namespace

ScanResult scan_covers_serial(const CoverEnumeration& en, std::uint64_t begin,
                              std::uint64_t end) {
    ScanResult result;
    if (begin >= end) return result;
    ScanContext ctx(en);
    ScanState state(ctx);
    state.seek(begin);
    for (std::uint64_t cursor = begin; cursor < end; ++cursor) {
        if (!state.colorable()) {
            result.all_colorable = false;
            result.counterexample_cursor = cursor;
            return result;
        }
        state.advance();
    }
    return result;
}

ScanResult scan_covers_parallel(const CoverEnumeration& en, std::uint64_t begin,
                                std::uint64_t end, int jobs) {
    ScanResult result;
    if (begin >= end) return result;
#ifndef _OPENMP
    return scan_covers_serial(en, begin, end);
#else
    if (jobs <= 1) return scan_covers_serial(en, begin, end);
    ScanContext ctx(en);
    std::uint64_t total = end - begin;
    std::uint64_t chunk = std::max<std::uint64_t>(1, total / ((std::uint64_t)jobs * 64));
    chunk = std::min<std::uint64_t>(chunk, 1u << 16);
    std::uint64_t nchunks = (total + chunk - 1) / chunk;
    std::atomic<std::uint64_t> best{UINT64_MAX};

#pragma omp parallel num_threads(jobs)
    {
        ScanState state(ctx);
#pragma omp for schedule(dynamic, 1)
        for (long long c = 0; c < (long long)nchunks; ++c) {
            std::uint64_t lo = begin + (std::uint64_t)c * chunk;
            std::uint64_t hi = std::min(end, lo + chunk);
            if (lo >= best.load(std::memory_order_relaxed)) continue;
            state.seek(lo);
            for (std::uint64_t cursor = lo; cursor < hi; ++cursor) {
                if (cursor >= best.load(std::memory_order_relaxed)) break;
                if (!state.colorable()) {
                    // keep the global minimum; every cursor below it was checked
                    std::uint64_t prev = best.load(std::memory_order_relaxed);
                    while (cursor < prev &&
                           !best.compare_exchange_weak(prev, cursor, std::memory_order_relaxed)) {
                    }
                    break;
                }
                state.advance();
            }
        }
    }
    std::uint64_t found = best.load();
    if (found != UINT64_MAX) {
        result.all_colorable = false;
        result.counterexample_cursor = found;
    }
    return result;
#endif
}

DpDecision is_dp_colorable(const Graph& g, int k, const ScanOptions& opts) {
    if (k < 1) throw std::invalid_argument("fold must be >= 1");
    CoverEnumeration en = enumerate_full_covers(g, k);
    std::uint64_t total = en.count();
    if (total > opts.budget) throw BudgetExceeded(k, total, opts.budget);
    ScanResult scan = opts.jobs <= 1 ? scan_covers_serial(en, 0, total)
                                     : scan_covers_parallel(en, 0, total, opts.jobs);
    DpDecision decision;
    decision.colorable = scan.all_colorable;
    if (scan.counterexample_cursor) {
        decision.counterexample_cursor = scan.counterexample_cursor;
        decision.counterexample = en.cover_at(*scan.counterexample_cursor);
    }
    return decision;
}

ChiDpResult chi_dp(const Graph& g, const ScanOptions& opts, int max_k) {
    ChiDpResult result;
    if (g.n == 0) {
        result.value = 0;
        return result;
    }
    int limit = max_k > 0 ? max_k : g.max_degree() + 1;
    std::optional<std::uint64_t> last_cursor;
    std::optional<Cover> last_counterexample;
    for (int k = 1; k <= limit; ++k) {
        DpDecision d = is_dp_colorable(g, k, opts);
        if (d.colorable) {
            result.value = k;
            result.counterexample_cursor = last_cursor;
            result.counterexample = std::move(last_counterexample);
            return result;
        }
        last_cursor = d.counterexample_cursor;
        last_counterexample = std::move(d.counterexample);
    }
    throw BudgetExceeded(limit, 0, opts.budget);
}

ChiDpResult chi_dp_edge(const Graph& g, const ScanOptions& opts, int max_k) {
    return chi_dp(line_graph(g), opts, max_k);
}

}  // namespace dp
