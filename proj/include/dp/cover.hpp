#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "dp/graph.hpp"

namespace dp {

// Host-graph edge between slot ui of class u and slot vi of class v, u < v.
// Clique edges inside a class are implicit and never stored.
struct CrossEdge {
    int u, ui, v, vi;
    auto operator<=>(const CrossEdge&) const = default;
};

// A cover of `base`: one clique class per vertex (|class u| = sizes[u]) plus
// cross edges. Cross edges are kept sorted and deduplicated (canonical form).
struct Cover {
    Graph base;
    std::vector<int> sizes;
    std::vector<CrossEdge> cross;

    void add_cross(int u, int ui, int v, int vi);  // accepts either orientation
    void canonicalize();
    bool is_k_fold(int k) const;
};

struct ListAssignment {
    std::vector<std::vector<int>> lists;  // per-vertex color sets over a shared universe
};

struct Transversal {
    std::vector<int> picks;  // slot index per vertex
};

bool is_valid_transversal(const Cover& cov, const Transversal& t);

enum class CoverCondition {
    CrossBetweenNonAdjacent,  // C3
    MatchingExceeded,         // C4 (simple) / C4' (multigraph)
    SlotOutOfRange,
};

struct CoverViolation {
    CoverCondition condition;
    CrossEdge witness;
};

struct ValidationReport {
    std::vector<CoverViolation> violations;
    std::vector<int> empty_classes;  // warnings, not violations
    bool ok() const { return violations.empty(); }
};

std::string describe(const CoverViolation& v, const Cover& cov);

// Checks C3, C4/C4' and slot ranges. Violations are data, not errors.
ValidationReport validate_cover(const Cover& cov);

// Slot i of vertex u is the i-th smallest color of lists[u]; cross edges join
// equal colors across base edges. Base must be simple.
Cover cover_from_lists(const Graph& g, const ListAssignment& lists);

// k-fold cover where edge e = uv (u < v) carries cross edges (u,i,v,perms[e][i]).
Cover full_cover(const Graph& g, int k, const std::vector<std::vector<int>>& perms);

// Relabels slots along the canonical spanning forest so every forest edge
// carries the identity matching. Preserves the transversal count exactly.
// Throws std::invalid_argument if the cover is not full k-fold.
Cover normalize_cover(const Cover& cov);

// Full k-fold cover with per-edge permutations drawn from a seeded generator;
// identical seeds give byte-identical serializations.
Cover random_cover(const Graph& g, int k, std::uint64_t seed);

std::string serialize_cover(const Cover& cov);
// Throws ParseError on malformed input, CoverValidationError on C1-C4' violations.
Cover parse_cover(const std::string& text);

class CoverValidationError : public std::runtime_error {
public:
    CoverValidationError(std::string what, ValidationReport report)
        : std::runtime_error(std::move(what)), report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

// Lexicographic permutation ranking, rank 0 = identity.
std::vector<int> unrank_permutation(int k, std::uint64_t rank);
std::uint64_t rank_permutation(const std::vector<int>& perm);
// k! saturated to UINT64_MAX on overflow.
std::uint64_t factorial_saturated(int k);

// Deterministic, splittable cursor over the normalized full k-fold covers of a
// base graph. Edges of the canonical spanning forest (Kruskal by edge id) are
// pinned to the identity matching; each free edge contributes one mixed-radix
// digit in 0..k!-1, first free edge most significant. Total count (k!)^|free|.
struct CoverEnumeration {
    Graph base;
    int k = 1;
    std::vector<int> forest_edges;
    std::vector<int> free_edges;

    std::uint64_t count() const;  // saturated
    std::vector<std::uint64_t> digits_at(std::uint64_t cursor) const;
    Cover cover_at(std::uint64_t cursor) const;
};

CoverEnumeration enumerate_full_covers(const Graph& g, int k);

// Kruskal-by-edge-id spanning forest: (forest edge ids, free edge ids).
std::pair<std::vector<int>, std::vector<int>> spanning_forest_split(const Graph& g);

}  // namespace dp
