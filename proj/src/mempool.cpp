// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/mempool.h>

#include <lnme/error.h>

#include "text.h"

#include <algorithm>
#include <numeric>

namespace lnme {

std::vector<FeeRate> default_band_edges()
{
    static constexpr std::int64_t edges[] = {0,   1,   2,   3,   4,   5,   6,   7,   8,   10,  12,   15,
                                             20,  30,  40,  50,  60,  70,  80,  100, 120, 150,  200,  250,
                                             300, 350, 400, 500, 600, 700, 800, 1000, 1200, 1400, 1700, 2000};
    std::vector<FeeRate> out;
    for (auto e : edges) out.push_back(FeeRate::from_sat_per_vb(e));
    return out;
}

std::int64_t FeeHistogram::total() const
{
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::size_t band_of(std::span<const FeeRate> band_edges, FeeRate fee)
{
    const auto it = std::upper_bound(band_edges.begin(), band_edges.end(), fee);
    if (it == band_edges.begin()) return 0;
    return static_cast<std::size_t>(it - band_edges.begin()) - 1;
}

FeeRate average_fee(const FeeHistogram& histogram)
{
    const auto& edges = histogram.band_edges;
    if (edges.empty()) return FeeRate{};
    // Twice the representative, so bounded-band midpoints stay integral.
    __int128 weighted = 0;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::int64_t count = histogram.counts[i];
        if (count == 0) continue;
        const std::int64_t twice_rep = i + 1 < edges.size() ? edges[i].centi() + edges[i + 1].centi() : 2 * edges[i].centi();
        weighted += static_cast<__int128>(count) * twice_rep;
        total += count;
    }
    if (total == 0) return edges.front();
    // weighted / (2 total), rounded half up.
    return FeeRate::from_centi(static_cast<std::int64_t>((weighted + total) / (2 * static_cast<__int128>(total))));
}

std::int64_t higher_priority_count(const FeeHistogram& histogram, std::size_t band, std::int64_t same_band_ahead)
{
    std::int64_t above = 0;
    for (std::size_t i = band + 1; i < histogram.counts.size(); ++i) above += histogram.counts[i];
    return above + same_band_ahead;
}

std::int64_t decay_same_band_ahead(std::int64_t same_band_ahead, std::int64_t count_before, std::int64_t count_after)
{
    const std::int64_t outflow = std::max<std::int64_t>(0, count_before - count_after);
    return std::max<std::int64_t>(0, same_band_ahead - outflow);
}

MempoolTimeline::MempoolTimeline(std::vector<FeeRate> band_edges, std::vector<Timestamp> timestamps, std::vector<std::int64_t> counts)
    : band_edges_(std::move(band_edges)), timestamps_(std::move(timestamps)), counts_(std::move(counts))
{
    const std::size_t bands = band_edges_.size();
    if (bands == 0) throw DataError("timeline needs at least one fee band");
    for (std::size_t i = 0; i < bands; ++i) {
        if (band_edges_[i].centi() < 0) throw DataError("negative fee band edge");
        if (i > 0 && !(band_edges_[i - 1] < band_edges_[i])) throw DataError("fee band edges must be strictly ascending");
    }
    if (timestamps_.empty()) throw DataError("timeline must contain at least one snapshot");
    if (counts_.size() != timestamps_.size() * bands) throw DataError("timeline counts do not match snapshots x bands");
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        if (timestamps_[i] <= timestamps_[i - 1]) {
            throw DataError("timeline timestamps not strictly increasing at " + std::to_string(timestamps_[i]));
        }
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] < 0) throw DataError("negative count in snapshot at " + std::to_string(timestamps_[i / bands]));
    }

    cumulative_outflow_.assign(counts_.size(), 0);
    for (std::size_t s = 1; s < timestamps_.size(); ++s) {
        for (std::size_t b = 0; b < bands; ++b) {
            const auto before = counts_[(s - 1) * bands + b];
            const auto after = counts_[s * bands + b];
            cumulative_outflow_[s * bands + b] = cumulative_outflow_[(s - 1) * bands + b] + std::max<std::int64_t>(0, before - after);
        }
    }
}

FeeHistogram MempoolTimeline::snapshot(std::size_t index) const
{
    const std::size_t bands = band_edges_.size();
    return FeeHistogram{band_edges_, std::span<const std::int64_t>(counts_).subspan(index * bands, bands)};
}

std::size_t MempoolTimeline::index_at(Timestamp t) const
{
    if (t < timestamps_.front() || t > timestamps_.back()) {
        throw DataError("time " + std::to_string(t) + " outside timeline [" + std::to_string(timestamps_.front()) + ", " +
                        std::to_string(timestamps_.back()) + "]");
    }
    const auto it = std::upper_bound(timestamps_.begin(), timestamps_.end(), t);
    return static_cast<std::size_t>(it - timestamps_.begin()) - 1;
}

MempoolTimeline load_timeline(std::string_view document)
{
    const auto lines = text::split_lines(document);
    std::size_t row = 0;
    while (row < lines.size() && text::is_blank(lines[row])) ++row;
    if (row == lines.size()) throw DataError("timeline CSV is empty");

    const auto header = text::split_fields(lines[row++]);
    if (header.size() < 2 || header[0] != "timestamp") throw DataError("timeline header must be 'timestamp,<edge_0>,...'");
    std::vector<FeeRate> edges;
    for (std::size_t i = 1; i < header.size(); ++i) edges.push_back(FeeRate::parse(header[i]));

    std::vector<Timestamp> timestamps;
    std::vector<std::int64_t> counts;
    for (; row < lines.size(); ++row) {
        if (text::is_blank(lines[row])) continue;
        const auto fields = text::split_fields(lines[row]);
        if (fields.size() != header.size()) {
            throw DataError("timeline line " + std::to_string(row + 1) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(fields.size()));
        }
        const auto t = text::require_int(fields[0], "timestamp");
        if (!timestamps.empty() && t <= timestamps.back()) {
            throw DataError("timeline timestamps not strictly increasing at " + std::to_string(t));
        }
        timestamps.push_back(t);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto count = text::require_int(fields[i], "count");
            if (count < 0) throw DataError("negative count in snapshot at " + std::to_string(t));
            counts.push_back(count);
        }
    }
    if (timestamps.empty()) throw DataError("timeline CSV has no data rows");
    return MempoolTimeline(std::move(edges), std::move(timestamps), std::move(counts));
}

std::string write_timeline(const MempoolTimeline& timeline)
{
    std::string out = "timestamp";
    for (auto edge : timeline.band_edges()) {
        out += ',';
        auto s = edge.to_string();
        // Integral edges are written without decimals, as in the source dataset.
        if (edge.centi() % 100 == 0) s = std::to_string(edge.centi() / 100);
        out += s;
    }
    out += '\n';
    for (std::size_t i = 0; i < timeline.size(); ++i) {
        out += std::to_string(timeline.timestamps()[i]);
        for (auto count : timeline.snapshot(i).counts) {
            out += ',';
            out += std::to_string(count);
        }
        out += '\n';
    }
    return out;
}

MempoolTimeline constant_timeline(std::vector<FeeRate> band_edges, std::vector<std::int64_t> counts, Timestamp start,
                                  std::size_t snapshots)
{
    if (counts.size() != band_edges.size()) throw UsageError("constant timeline: one count per band required");
    if (snapshots == 0) throw UsageError("constant timeline: at least one snapshot required");
    std::vector<Timestamp> timestamps(snapshots);
    std::vector<std::int64_t> all;
    all.reserve(snapshots * counts.size());
    for (std::size_t i = 0; i < snapshots; ++i) {
        timestamps[i] = start + static_cast<Timestamp>(60 * i);
        all.insert(all.end(), counts.begin(), counts.end());
    }
    return MempoolTimeline(std::move(band_edges), std::move(timestamps), std::move(all));
}

BlockTrace::BlockTrace(std::vector<BlockEntry> entries) : entries_(std::move(entries))
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].tx_count < 0) throw DataError("negative tx_count at height " + std::to_string(entries_[i].height));
        if (i == 0) continue;
        if (entries_[i].height != entries_[i - 1].height + 1) {
            throw DataError("block trace height gap: " + std::to_string(entries_[i - 1].height) + " -> " +
                            std::to_string(entries_[i].height));
        }
        entries_[i].timestamp = std::max(entries_[i].timestamp, entries_[i - 1].timestamp);
    }
}

std::size_t BlockTrace::first_at_or_after(Timestamp t) const
{
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                                     [](const BlockEntry& e, Timestamp value) { return e.timestamp < value; });
    return static_cast<std::size_t>(it - entries_.begin());
}

std::int64_t BlockTrace::average_tx_count(std::size_t begin, std::size_t count) const
{
    if (count == 0 || begin + count > entries_.size()) throw UsageError("block window outside the trace");
    std::int64_t sum = 0;
    for (std::size_t i = begin; i < begin + count; ++i) sum += entries_[i].tx_count;
    const auto n = static_cast<std::int64_t>(count);
    return (2 * sum + n) / (2 * n);
}

BlockTrace load_block_trace(std::string_view document)
{
    std::vector<BlockEntry> entries;
    bool first = true;
    std::size_t line_no = 0;
    for (auto line : text::split_lines(document)) {
        ++line_no;
        if (text::is_blank(line)) continue;
        const auto fields = text::split_fields(line);
        if (first) {
            first = false;
            if (fields.size() == 3 && fields[0] == "height" && fields[1] == "timestamp" && fields[2] == "tx_count") continue;
        }
        if (fields.size() != 3) {
            throw DataError("block trace line " + std::to_string(line_no) + ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        entries.push_back({text::require_int(fields[0], "height"), text::require_int(fields[1], "timestamp"),
                           text::require_int(fields[2], "tx_count")});
    }
    if (entries.empty()) throw DataError("block trace has no rows");
    return BlockTrace(std::move(entries));
}

std::string write_block_trace(const BlockTrace& trace)
{
    std::string out = "height,timestamp,tx_count\n";
    for (const auto& e : trace.entries()) {
        out += std::to_string(e.height) + ',' + std::to_string(e.timestamp) + ',' + std::to_string(e.tx_count) + '\n';
    }
    return out;
}

BlockTrace uniform_block_trace(BlockHeight first_height, Timestamp first_timestamp, std::size_t count, std::int64_t tx_per_block,
                               std::int64_t interval)
{
    std::vector<BlockEntry> entries(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto offset = static_cast<std::int64_t>(i);
        entries[i] = {first_height + offset, first_timestamp + offset * interval, tx_per_block};
    }
    return BlockTrace(std::move(entries));
}

} // namespace lnme
