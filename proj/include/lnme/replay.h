// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_REPLAY_H
#define LNME_REPLAY_H

#include <lnme/fee_rate.h>
#include <lnme/mempool.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace lnme {

using TxId = std::uint64_t;

enum class TxStatus { Pending, Confirmed, Withdrawn };

struct MonitoredTx {
    TxId id{0};
    FeeRate fee;
    Timestamp submitted_at{0};
    /// Time of the latest (re)submission; a fee bump re-enters the queue.
    Timestamp queued_at{0};
    /// Historical transactions of the same band still ahead of this one.
    std::int64_t same_band_ahead{0};
    TxStatus status{TxStatus::Pending};
    /// Set iff status == Confirmed.
    std::optional<BlockHeight> confirmed_height;
};

/// Per-block space available to monitored transactions.
struct BlockCapacityMode {
    /// Empty: use each block's historical tx_count.
    std::optional<std::int64_t> constant_average;

    static BlockCapacityMode historical() { return {}; }
    static BlockCapacityMode constant(std::int64_t avg_tx_per_block);

    std::int64_t capacity(const BlockEntry& block) const
    {
        return constant_average ? *constant_average : block.tx_count;
    }
};

/// Contiguous ids [first, first + count) confirmed together.
struct ConfirmedBatch {
    TxId first{0};
    std::uint64_t count{0};

    bool operator==(const ConfirmedBatch&) const = default;
};

/**
 * Replays monitored transactions against historical mempool congestion.
 *
 * A monitored transaction in band b confirms in a block when
 *   (historical txs in bands above b) + same_band_ahead < remaining capacity,
 * visiting pending transactions by band (descending), same_band_ahead,
 * queue time and id. Each confirmation uses one unit of capacity. Historical
 * counts are read-only: transactions displaced by monitored ones are not
 * re-queued. same_band_ahead starts at the band's count at submission and
 * shrinks by the band's snapshot-to-snapshot outflow.
 *
 * Transactions submitted together with the same fee are stored as one run of
 * consecutive ids, which keeps million-transaction runs cheap; observable
 * behaviour is identical to storing them one by one.
 *
 * Time (submissions, bumps, blocks) must not go backwards. The timeline must
 * outlive the engine.
 */
class ReplayEngine {
public:
    explicit ReplayEngine(const MempoolTimeline& timeline);

    MonitoredTx submit(TxId id, FeeRate fee, Timestamp t);
    /// Submits ids [first, first + count) with identical fee and time.
    void submit_batch(TxId first, std::uint64_t count, FeeRate fee, Timestamp t);

    /// Replace-by-fee: the transaction re-enters the queue of its new band.
    MonitoredTx bump(TxId id, FeeRate new_fee, Timestamp t);
    /// Bumps every pending transaction with id in [first, last) to
    /// new_fee(fee); transactions whose fee would not increase are left
    /// untouched. Returns the number bumped.
    std::uint64_t bump_range(TxId first, TxId last, const std::function<FeeRate(FeeRate)>& new_fee, Timestamp t);

    void withdraw(TxId id);
    /// Double-spend pair: once either confirms the other is withdrawn before
    /// it can use block space.
    void set_conflict(TxId a, TxId b);

    /// Blocks must arrive in increasing height order.
    std::vector<ConfirmedBatch> process_block(const BlockEntry& block, const BlockCapacityMode& mode);

    MonitoredTx tx(TxId id) const;
    std::uint64_t pending_count() const { return pending_total_; }
    std::optional<BlockHeight> last_height() const { return last_height_; }

private:
    struct Entry {
        std::uint64_t count{1};
        FeeRate fee;
        std::size_t band{0};
        Timestamp submitted_at{0};
        Timestamp queued_at{0};
        /// Position at submission plus the band's cumulative outflow then;
        /// the live position is max(0, key - cumulative outflow now).
        std::int64_t key{0};
        std::optional<TxId> conflict;
    };

    struct Settled {
        std::uint64_t count{1};
        FeeRate fee;
        Timestamp submitted_at{0};
        Timestamp queued_at{0};
        TxStatus status{TxStatus::Confirmed};
        std::optional<BlockHeight> height;
    };

    using ReadyKey = std::tuple<Timestamp, TxId>;
    using QueuedKey = std::tuple<std::int64_t, Timestamp, TxId>;

    struct BandQueue {
        std::set<ReadyKey> ready;   // position 0
        std::set<QueuedKey> queued; // position > 0 when last examined
    };

    std::size_t advance_clock(Timestamp t);
    void check_unused(TxId first, std::uint64_t count) const;
    void enqueue(TxId first, Entry entry, Timestamp t);
    void unlink(TxId first, const Entry& entry);
    std::map<TxId, Entry>::iterator isolate(TxId id);
    std::map<TxId, Entry>::iterator split(std::map<TxId, Entry>::iterator it, std::uint64_t prefix);
    void settle(TxId first, const Entry& entry, std::uint64_t count, TxStatus status, std::optional<BlockHeight> height);
    void withdraw_entry(std::map<TxId, Entry>::iterator it);
    void confirm_prefix(std::map<TxId, Entry>::iterator it, std::uint64_t count, BlockHeight height, std::vector<ConfirmedBatch>& out);

    const MempoolTimeline* timeline_;
    std::map<TxId, Entry> pending_;
    std::map<TxId, Settled> settled_;
    std::vector<BandQueue> bands_;
    std::uint64_t pending_total_{0};
    std::optional<Timestamp> clock_;
    std::size_t clock_index_{0};
    std::optional<BlockHeight> last_height_;
};

/// Called after each replayed block with the monitored confirmations.
using BlockObserver = std::function<void(BlockHeight, std::span<const ConfirmedBatch>)>;

/// JSON line `{"height":h,"confirmed":[ids...]}` for the optional event log.
std::string event_log_line(BlockHeight height, std::span<const ConfirmedBatch> batches);

} // namespace lnme

#endif // LNME_REPLAY_H
