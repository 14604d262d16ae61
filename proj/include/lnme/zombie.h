// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_ZOMBIE_H
#define LNME_ZOMBIE_H

#include <lnme/scenario.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lnme {

struct ZombieConfig {
    /// Channels to force-close; only the count matters for closure delay.
    std::uint64_t channel_count{1};
    FeeStrategy strategy;
    Scenario scenario;
    BlockObserver on_block;
};

struct ZombiePoint {
    BlockHeight height{0};
    std::uint64_t remaining{0};

    bool operator==(const ZombiePoint&) const = default;
};

struct ZombieReport {
    /// Remaining open channels after each replayed block.
    std::vector<ZombiePoint> series;
    /// Blocks from the attack start until the last closing transaction
    /// confirmed; empty when the horizon ran out first.
    std::optional<std::size_t> blocks_to_close_all;
    bool horizon_exhausted{false};

    std::uint64_t remaining() const;
};

/**
 * All closing transactions enter the mempool at the attack start with the
 * strategy's initial fee. A dynamic strategy bumps every still-pending
 * transaction after each `step` blocks from the start (one global cadence).
 */
ZombieReport simulate_zombie(const ZombieConfig& config);

struct ZombieSweepRow {
    std::uint64_t channel_count{0};
    FeeStrategy strategy;
    std::optional<std::size_t> blocks_to_close_all;
    bool horizon_exhausted{false};
};

/// One run per config, in input order. threads = 0 reads LNME_THREADS.
std::vector<ZombieSweepRow> sweep_zombie(std::span<const ZombieConfig> configs, unsigned threads = 0);

/// CSV `height,remaining`.
std::string write_zombie_series_csv(const ZombieReport& report);
/// CSV `channels,strategy,initial_fee,step,beta,blocks_to_close_all,horizon_exhausted`.
std::string write_zombie_sweep_csv(std::span<const ZombieSweepRow> rows);

} // namespace lnme

#endif // LNME_ZOMBIE_H
