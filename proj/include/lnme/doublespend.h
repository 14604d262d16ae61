// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_DOUBLESPEND_H
#define LNME_DOUBLESPEND_H

#include <lnme/cut.h>
#include <lnme/graph.h>
#include <lnme/scenario.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lnme {

struct FixedDelay {
    std::int64_t blocks{144};
};

/// Delay proportional to capacity, clamped to [min_delay, max_delay].
struct CapacityScaledDelay {
    Satoshis max_funding{16'777'215};
    std::int64_t max_delay{2016};
    std::int64_t min_delay{144};
};

using DelayPolicy = std::variant<FixedDelay, CapacityScaledDelay>;

/// round(capacity / max_funding * max_delay) (half up), clamped; or the fixed value.
std::int64_t to_self_delay(Satoshis capacity, const DelayPolicy& policy);

struct AttackerStrategy {
    FeeRate commitment_fee{FeeRate::from_sat_per_vb(50)};
    FeeStrategy sweep{FeeStrategy::fixed(FeeRate::from_sat_per_vb(100))};
};

struct AttackedChannel {
    std::string id;
    Satoshis capacity{0};
};

std::vector<AttackedChannel> attacked_channels(const LnGraph& graph, const Cut& cut);
std::vector<AttackedChannel> attacked_channels(const CutRecord& record);

struct DoubleSpendConfig {
    std::vector<AttackedChannel> channels;
    /// Penalties start at the mempool's average fee at submission; an
    /// optional schedule then bumps each one from its own submission.
    std::optional<BumpSchedule> honest_bump;
    AttackerStrategy attacker;
    DelayPolicy delay{CapacityScaledDelay{}};
    Scenario scenario;
    /// Penalty becomes invalid once the delay expires (sensitivity mode).
    /// By default it stays valid and races the sweep.
    bool strict_expiry{false};
    BlockObserver on_block;
};

enum class Outcome { Undecided, Compromised, Defended };

std::string_view to_string(Outcome outcome);

struct ChannelOutcome {
    std::string id;
    Satoshis capacity{0};
    std::int64_t delay{0};
    Outcome outcome{Outcome::Undecided};
    std::optional<BlockHeight> commitment_height;
    std::optional<FeeRate> penalty_fee; // initial fee of the penalty
    std::optional<BlockHeight> sweep_submitted;
    std::optional<BlockHeight> decided_height;
};

struct CompromisedPoint {
    BlockHeight height{0};
    std::size_t compromised{0};

    bool operator==(const CompromisedPoint&) const = default;
};

struct DoubleSpendReport {
    std::size_t attacked{0};
    std::size_t compromised{0};
    std::size_t defended{0};
    std::size_t undecided{0};
    std::vector<ChannelOutcome> per_channel;
    std::vector<CompromisedPoint> series;
};

/**
 * Mass double-spend race. Every revoked commitment is broadcast at the
 * attack start with the attacker's commitment fee. When one confirms at
 * height h the victim's penalty is broadcast in the same block; if the
 * penalty is still pending after block h + delay the attacker broadcasts the
 * sweep. Penalty and sweep spend the same output, so the first of the two to
 * confirm decides the channel. Channels still open when the trace ends are
 * reported Undecided.
 */
DoubleSpendReport simulate_double_spend(const DoubleSpendConfig& config);

struct AverageCapacityProfit {
    Satoshis capacity{0};
};
struct PerChannelProfit {};
using ProfitMode = std::variant<AverageCapacityProfit, PerChannelProfit>;

using MilliSatoshis = std::int64_t;

/**
 * AverageCapacity(c): c/2 * n - c/2 * (a - n). PerChannel: half the capacity
 * of each compromised channel minus half that of each defended one. Results
 * are in millisatoshis so that half-satoshi terms stay exact. Undecided
 * channels throw unless `exclude_undecided` is set, in which case they are
 * left out of both n and a.
 */
MilliSatoshis realized_profit(const DoubleSpendReport& report, const ProfitMode& mode, bool exclude_undecided = false);

/// (p - 1/2) * cut capacity, in satoshis. Requires 0 <= p <= 1.
double expected_profit(Satoshis cut_capacity, double p);
inline double expected_profit(const Cut& cut, double p) { return expected_profit(cut.cut_capacity, p); }

struct ProfitRow {
    std::size_t k{0};
    std::size_t attacked{0};
    std::size_t compromised{0};
    std::size_t defended{0};
    std::size_t undecided{0};
    MilliSatoshis profit{0};
};

/**
 * For each k: greedy capacity cut of size k (one greedy run, prefixes),
 * then a double-spend simulation on its channels using `base` for all other
 * settings. Undecided channels are excluded from the profit.
 */
std::vector<ProfitRow> profit_vs_k(const LnGraph& graph, std::span<const std::size_t> ks, const DoubleSpendConfig& base,
                                   const ProfitMode& mode, unsigned threads = 0);

std::string_view to_string(const ProfitMode& mode);

/// Report JSON; `profit` is echoed when computed.
std::string write_double_spend_json(const DoubleSpendReport& report, std::optional<MilliSatoshis> profit, const ProfitMode& mode);
/// CSV `height,cumulative_compromised`.
std::string write_compromised_series_csv(const DoubleSpendReport& report);
/// CSV `k,attacked,compromised,defended,undecided,profit_sat,profit_btc`.
std::string write_profit_csv(std::span<const ProfitRow> rows);

/// Satoshis as BTC with 8 decimals; millisatoshi input is truncated to sats.
std::string format_btc(MilliSatoshis msat);

} // namespace lnme

#endif // LNME_DOUBLESPEND_H
