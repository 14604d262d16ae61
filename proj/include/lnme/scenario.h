// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_SCENARIO_H
#define LNME_SCENARIO_H

#include <lnme/fee_rate.h>
#include <lnme/mempool.h>
#include <lnme/replay.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace lnme {

/// 2017-12-07 08:15 US Central time: start of the high-congestion window.
inline constexpr Timestamp SCENARIO1_START = 1512656100;
inline constexpr BlockHeight SCENARIO1_FIRST_BLOCK = 498084;
/// Length of the scenario-1 congestion episode, used to average block sizes.
inline constexpr std::size_t SCENARIO1_WINDOW_BLOCKS = 8000;
/// 2022-01-01 00:00 US Central time: typical congestion.
inline constexpr Timestamp SCENARIO2_START = 1641016800;

/// Multiply the fee by beta every `step` blocks.
struct BumpSchedule {
    std::uint32_t step{1};
    double beta{1.1};
};

/// Static when `bump` is empty.
struct FeeStrategy {
    FeeRate initial;
    std::optional<BumpSchedule> bump;

    static FeeStrategy fixed(FeeRate fee) { return {fee, std::nullopt}; }
    static FeeStrategy dynamic(FeeRate initial_fee, std::uint32_t step, double beta);

    /// "static:70.00" or "dynamic:70.00:5:1.1".
    std::string describe() const;
};

/// Throws UsageError unless step >= 1 and beta > 1.
void validate(const BumpSchedule& schedule);

/// Historical data plus the attack start. Inputs are shared read-only, so
/// one Scenario can back many concurrent runs.
struct Scenario {
    std::shared_ptr<const MempoolTimeline> timeline;
    std::shared_ptr<const BlockTrace> blocks;
    BlockCapacityMode capacity;
    Timestamp start{0};
    /// Optional cap on the number of replayed blocks.
    std::optional<std::size_t> max_blocks;
};

/// Trace entries [begin, end) replayed by a run.
struct BlockWindow {
    std::size_t begin{0};
    std::size_t end{0};

    std::size_t size() const { return end - begin; }
};

/**
 * Blocks from the first one stamped at or after `start`, up to the end of
 * the timeline, the end of the trace or `max_blocks`, whichever comes first.
 * Throws DataError when the start lies outside the timeline or no block
 * falls inside it.
 */
BlockWindow replay_window(const Scenario& scenario);

} // namespace lnme

#endif // LNME_SCENARIO_H
