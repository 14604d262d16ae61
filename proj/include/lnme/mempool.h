// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_MEMPOOL_H
#define LNME_MEMPOOL_H

#include <lnme/fee_rate.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lnme {

/// Unix seconds.
using Timestamp = std::int64_t;
using BlockHeight = std::int64_t;

/// Lower edges of the public per-minute mempool dataset's fee ranges.
std::vector<FeeRate> default_band_edges();

/**
 * Non-owning view of one fee-band histogram. Band i covers
 * [band_edges[i], band_edges[i+1]); the last band is open-ended.
 */
struct FeeHistogram {
    std::span<const FeeRate> band_edges;
    std::span<const std::int64_t> counts;

    std::size_t band_count() const { return band_edges.size(); }
    std::int64_t total() const;
};

/// Band containing `fee`; fees below the lowest edge fall into band 0.
std::size_t band_of(std::span<const FeeRate> band_edges, FeeRate fee);

/**
 * Count-weighted mean of band representatives: the midpoint for bounded
 * bands, the lower edge for the open top band. Rounded half up to 0.01.
 * An empty mempool yields the lowest band edge.
 */
FeeRate average_fee(const FeeHistogram& histogram);

/// Historical transactions in bands strictly above `band`, plus
/// `same_band_ahead` predecessors inside it.
std::int64_t higher_priority_count(const FeeHistogram& histogram, std::size_t band, std::int64_t same_band_ahead);

/// One snapshot-to-snapshot step of queue drain: a position shrinks by the
/// band's outflow (never by arrivals), floored at zero.
std::int64_t decay_same_band_ahead(std::int64_t same_band_ahead, std::int64_t count_before, std::int64_t count_after);

/**
 * Time series of fee-band histograms sharing one set of band edges.
 * Immutable after loading; also precomputes per-band cumulative outflow so
 * that queue positions can be drained in O(1).
 */
class MempoolTimeline {
public:
    MempoolTimeline(std::vector<FeeRate> band_edges, std::vector<Timestamp> timestamps, std::vector<std::int64_t> counts);

    std::size_t band_count() const { return band_edges_.size(); }
    std::size_t size() const { return timestamps_.size(); }
    std::span<const FeeRate> band_edges() const { return band_edges_; }
    std::span<const Timestamp> timestamps() const { return timestamps_; }
    Timestamp first_timestamp() const { return timestamps_.front(); }
    Timestamp last_timestamp() const { return timestamps_.back(); }

    FeeHistogram snapshot(std::size_t index) const;
    /// Index of the latest snapshot at or before t; throws DataError when t
    /// lies outside [first, last].
    std::size_t index_at(Timestamp t) const;
    FeeHistogram snapshot_at(Timestamp t) const { return snapshot(index_at(t)); }

    /// Sum of the band's step outflows max(0, c_i - c_{i+1}) for i < index.
    std::int64_t cumulative_outflow(std::size_t index, std::size_t band) const
    {
        return cumulative_outflow_[index * band_edges_.size() + band];
    }

private:
    std::vector<FeeRate> band_edges_;
    std::vector<Timestamp> timestamps_;
    std::vector<std::int64_t> counts_;             // row-major, size() x band_count()
    std::vector<std::int64_t> cumulative_outflow_; // same layout
};

/// Header `timestamp,<edge_0>,<edge_1>,...`, one row per snapshot.
MempoolTimeline load_timeline(std::string_view document);
std::string write_timeline(const MempoolTimeline& timeline);

/// Every snapshot identical, one per minute over [start, start + 60*(snapshots-1)].
MempoolTimeline constant_timeline(std::vector<FeeRate> band_edges, std::vector<std::int64_t> counts, Timestamp start,
                                  std::size_t snapshots);

struct BlockEntry {
    BlockHeight height{0};
    Timestamp timestamp{0};
    std::int64_t tx_count{0};

    bool operator==(const BlockEntry&) const = default;
};

/**
 * Consecutive blocks. Header timestamps can regress slightly on chain; the
 * loader stores the running maximum so timestamps are non-decreasing.
 */
class BlockTrace {
public:
    explicit BlockTrace(std::vector<BlockEntry> entries);

    std::span<const BlockEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const BlockEntry& operator[](std::size_t i) const { return entries_[i]; }

    /// First block with timestamp >= t, or size() if none.
    std::size_t first_at_or_after(Timestamp t) const;
    /// Mean tx_count over entries [begin, begin + count), rounded to nearest.
    std::int64_t average_tx_count(std::size_t begin, std::size_t count) const;

private:
    std::vector<BlockEntry> entries_;
};

/// Rows `height,timestamp,tx_count` with an optional header of those names.
BlockTrace load_block_trace(std::string_view document);
std::string write_block_trace(const BlockTrace& trace);

/// `count` blocks of `tx_per_block` transactions, `interval` seconds apart.
BlockTrace uniform_block_trace(BlockHeight first_height, Timestamp first_timestamp, std::size_t count,
                               std::int64_t tx_per_block, std::int64_t interval = 600);

} // namespace lnme

#endif // LNME_MEMPOOL_H
