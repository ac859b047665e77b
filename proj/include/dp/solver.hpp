#pragma once

#include <cstdint>
#include <optional>

#include "dp/cover.hpp"

namespace dp {

struct SolveStats {
    std::uint64_t nodes = 0;  // slot assignments tried
    bool colorable = false;
    std::optional<Transversal> witness;
};

// Deterministic backtracking: branch on the unassigned class with fewest
// remaining slots (ties: lowest vertex index), slots ascending, propagate by
// deleting cross-neighbors of the assigned node.
std::optional<Transversal> find_transversal(const Cover& cov);
std::optional<Transversal> find_transversal(const Cover& cov, SolveStats& stats);

// Exact transversal count by exhaustive backtracking.
std::uint64_t count_transversals(const Cover& cov);

// Processes `ordering` back to front, picking the lowest slot compatible with
// already-picked neighbors. Succeeds whenever every class has more slots than
// the vertex has neighbors later in the ordering.
std::optional<Transversal> greedy_transversal(const Cover& cov, const std::vector<int>& ordering);

// Fixpoint of forced picks: singleton classes propagate, deleting neighbors.
struct UnitPropagation {
    bool contradiction = false;
    std::vector<std::vector<int>> alive;  // surviving slots per class
};
UnitPropagation unit_propagate(const Cover& cov);

struct ScanOptions {
    std::uint64_t budget = 100'000'000;  // max covers per enumeration
    int jobs = 1;
};

// Verdict of a cover-enumeration scan. The counterexample cursor, when
// present, is the smallest index of a non-colorable cover in the scanned
// range, independent of worker count.
struct ScanResult {
    bool all_colorable = true;
    std::optional<std::uint64_t> counterexample_cursor;
};

// Serial reference kernel; scans cursors [begin, end).
ScanResult scan_covers_serial(const CoverEnumeration& en, std::uint64_t begin, std::uint64_t end);
// OpenMP kernel; identical result for any job count.
ScanResult scan_covers_parallel(const CoverEnumeration& en, std::uint64_t begin,
                                std::uint64_t end, int jobs);

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(int k, std::uint64_t required, std::uint64_t budget);
    BudgetExceeded(int k, const std::string& what);
    int fold() const { return k_; }
    std::uint64_t required() const { return required_; }

private:
    int k_;
    std::uint64_t required_ = 0;
};

struct DpDecision {
    bool colorable = false;
    std::optional<std::uint64_t> counterexample_cursor;
    std::optional<Cover> counterexample;
};

// True iff every normalized full k-fold cover has a transversal. On false the
// counterexample with the smallest cursor index is returned. Throws
// BudgetExceeded when the enumeration is larger than opts.budget.
DpDecision is_dp_colorable(const Graph& g, int k, const ScanOptions& opts = {});

struct ChiDpResult {
    int value = 0;
    // Counterexample found at fold value-1 (absent when value <= 1).
    std::optional<std::uint64_t> counterexample_cursor;
    std::optional<Cover> counterexample;
};

// Least k with is_dp_colorable(g, k); searches upward from k = 1.
// max_k <= 0 means the max_degree + 1 guarantee.
ChiDpResult chi_dp(const Graph& g, const ScanOptions& opts = {}, int max_k = 0);
// chi_dp of the line graph.
ChiDpResult chi_dp_edge(const Graph& g, const ScanOptions& opts = {}, int max_k = 0);

}  // namespace dp
