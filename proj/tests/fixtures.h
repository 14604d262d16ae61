// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_TEST_FIXTURES_H
#define LNME_TEST_FIXTURES_H

#include <lnme/mempool.h>
#include <lnme/scenario.h>

#include <memory>
#include <vector>

namespace lnme::fixture {

inline constexpr Timestamp START = 1'600'000'000;

/// Constant per-band counts over the default edges, long enough for `blocks`
/// blocks at 600 s spacing starting at START.
inline Scenario constant_scenario(std::vector<std::int64_t> counts, std::size_t blocks, std::int64_t tx_per_block)
{
    Scenario s;
    s.timeline = std::make_shared<const MempoolTimeline>(
        constant_timeline(default_band_edges(), std::move(counts), START, blocks * 10 + 1));
    s.blocks = std::make_shared<const BlockTrace>(uniform_block_trace(1000, START, blocks, tx_per_block));
    s.start = START;
    return s;
}

inline Scenario empty_scenario(std::size_t blocks, std::int64_t tx_per_block)
{
    return constant_scenario(std::vector<std::int64_t>(36, 0), blocks, tx_per_block);
}

} // namespace lnme::fixture

#endif // LNME_TEST_FIXTURES_H
