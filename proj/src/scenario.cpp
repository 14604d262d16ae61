// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/scenario.h>

#include <lnme/error.h>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace lnme {

void validate(const BumpSchedule& schedule)
{
    if (schedule.step < 1) throw UsageError("bump step must be at least 1 block");
    if (!std::isfinite(schedule.beta) || !(schedule.beta > 1.0)) throw UsageError("bump multiplier beta must be > 1");
}

FeeStrategy FeeStrategy::dynamic(FeeRate initial_fee, std::uint32_t step, double beta)
{
    BumpSchedule schedule{step, beta};
    validate(schedule);
    return {initial_fee, schedule};
}

std::string FeeStrategy::describe() const
{
    if (!bump) return "static:" + initial.to_string();
    return fmt::format("dynamic:{}:{}:{}", initial.to_string(), bump->step, bump->beta);
}

BlockWindow replay_window(const Scenario& scenario)
{
    if (!scenario.timeline || !scenario.blocks) throw UsageError("scenario needs a timeline and a block trace");
    const auto& timeline = *scenario.timeline;
    const auto& blocks = *scenario.blocks;
    if (scenario.start < timeline.first_timestamp() || scenario.start > timeline.last_timestamp()) {
        throw DataError("attack start " + std::to_string(scenario.start) + " outside the mempool timeline");
    }

    BlockWindow window;
    window.begin = blocks.first_at_or_after(scenario.start);
    window.end = window.begin;
    while (window.end < blocks.size() && blocks[window.end].timestamp <= timeline.last_timestamp()) ++window.end;
    if (window.end == window.begin) {
        throw DataError("block trace and mempool timeline do not overlap after the attack start");
    }
    if (scenario.max_blocks) window.end = std::min(window.end, window.begin + *scenario.max_blocks);
    return window;
}

} // namespace lnme
