// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_CUT_H
#define LNME_CUT_H

#include <lnme/graph.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lnme {

/// EdgeCount is the Capacity objective with every capacity set to 1.
enum class Objective { EdgeCount, Capacity };

std::string_view to_string(Objective objective);
/// Accepts "edges"/"edge_count"/"lmc" and "capacity"/"lwmc".
Objective parse_objective(std::string_view name);

/// Weight of a single channel under the objective.
inline std::int64_t objective_weight(const Channel& channel, Objective objective)
{
    return objective == Objective::EdgeCount ? 1 : channel.capacity;
}

struct CutValue {
    std::int64_t edge_count{0};
    Satoshis cut_capacity{0};

    std::int64_t value(Objective objective) const
    {
        return objective == Objective::EdgeCount ? edge_count : cut_capacity;
    }
    bool operator==(const CutValue&) const = default;
};

/// Channels with exactly one endpoint in the coalition. Duplicate members
/// are counted once; throws DataError for an index outside the graph.
CutValue cut_value(const LnGraph& graph, std::span<const NodeIndex> coalition);

/// A k-lopsided cut (Z, V \ Z) with |Z| = k.
struct Cut {
    Objective objective{Objective::EdgeCount};
    /// Members of Z in selection order (ascending for the exact solver).
    std::vector<NodeIndex> coalition;
    /// Indices into graph.channels(), ascending.
    std::vector<ChannelIndex> cut_channels;
    std::int64_t edge_count{0};
    Satoshis cut_capacity{0};

    std::size_t k() const { return coalition.size(); }
    std::int64_t value() const { return objective == Objective::EdgeCount ? edge_count : cut_capacity; }
};

/// Builds the Cut record for an explicit coalition.
Cut make_cut(const LnGraph& graph, std::span<const NodeIndex> coalition, Objective objective);

struct GreedyStep {
    std::size_t step{0}; // 1-based
    NodeIndex node{0};
    std::int64_t gain{0};
    std::int64_t cumulative{0};
};

using GreedyTrace = std::vector<GreedyStep>;

/**
 * Greedy k-lopsided max-cut. Starting from (empty, V) it moves, k times, the
 * right-side node whose move increases the objective the most:
 *   gain(v) = w(v, right side) - w(v, coalition).
 * Ties go to the smallest node index. Moves with negative gain are still
 * taken so that |Z| = k. Gains live in a max-heap with lazy invalidation.
 * Requires 1 <= k <= node_count().
 */
std::pair<Cut, GreedyTrace> greedy_lopsided_cut(const LnGraph& graph, std::size_t k, Objective objective);

inline constexpr std::uint64_t DEFAULT_ENUMERATION_BUDGET = 10'000'000;

struct ExactOptions {
    std::uint64_t budget{DEFAULT_ENUMERATION_BUDGET};
    /// Worker threads for the enumeration; 0 picks from LNME_THREADS.
    unsigned threads{1};
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/**
 * Exhaustive k-subset enumeration. Returns a maximizer; among equal values
 * the lexicographically smallest index set wins, independent of the worker
 * count. Throws BudgetError when C(n, k) exceeds the budget.
 */
Cut exact_lopsided_cut(const LnGraph& graph, std::size_t k, Objective objective, const ExactOptions& options = {});

struct CurvePoint {
    std::size_t k{0};
    std::int64_t edge_count{0};
    Satoshis cut_capacity{0};

    std::int64_t value(Objective objective) const
    {
        return objective == Objective::EdgeCount ? edge_count : cut_capacity;
    }
};

/// Both cut metrics after each prefix of a node sequence.
std::vector<CurvePoint> prefix_curve(const LnGraph& graph, std::span<const NodeIndex> order);

/// One greedy run to k_max; point k is the value of the greedy k-prefix.
std::vector<CurvePoint> value_vs_k_curve(const LnGraph& graph, std::size_t k_max, Objective objective);

/// Cut export document (see write_cut_json).
struct CutChannelRecord {
    std::string id;
    std::string node_a;
    std::string node_b;
    Satoshis capacity{0};
};

struct CutRecord {
    std::size_t k{0};
    Objective objective{Objective::EdgeCount};
    std::vector<std::string> coalition;
    std::vector<CutChannelRecord> cut_channels;
    std::int64_t edge_count{0};
    Satoshis cut_capacity_sat{0};
};

CutRecord to_record(const LnGraph& graph, const Cut& cut);
std::string write_cut_json(const CutRecord& record);
/// Validates that edge_count and cut_capacity_sat agree with cut_channels.
CutRecord parse_cut_json(std::string_view document);

/// CSV `k,edge_count,cut_capacity_sat`.
std::string write_curve_csv(std::span<const CurvePoint> curve);

} // namespace lnme

#endif // LNME_CUT_H
