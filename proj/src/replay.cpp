// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/replay.h>

#include <lnme/error.h>

#include <algorithm>

namespace lnme {

BlockCapacityMode BlockCapacityMode::constant(std::int64_t avg_tx_per_block)
{
    if (avg_tx_per_block <= 0) throw UsageError("constant block capacity must be positive");
    return BlockCapacityMode{avg_tx_per_block};
}

ReplayEngine::ReplayEngine(const MempoolTimeline& timeline)
    : timeline_(&timeline), bands_(timeline.band_count())
{
}

std::size_t ReplayEngine::advance_clock(Timestamp t)
{
    if (clock_ && t < *clock_) {
        throw UsageError("replay time moved backwards: " + std::to_string(t) + " < " + std::to_string(*clock_));
    }
    clock_index_ = timeline_->index_at(t);
    clock_ = t;
    return clock_index_;
}

void ReplayEngine::check_unused(TxId first, std::uint64_t count) const
{
    if (count == 0) throw UsageError("empty transaction batch");
    const TxId last = first + count - 1;
    if (last < first) throw UsageError("transaction id range overflows");
    const auto overlaps = [&](const auto& ranges) {
        auto it = ranges.upper_bound(last);
        if (it == ranges.begin()) return false;
        --it;
        return it->first + it->second.count > first;
    };
    if (overlaps(pending_) || overlaps(settled_)) throw UsageError("duplicate transaction id " + std::to_string(first));
}

void ReplayEngine::enqueue(TxId first, Entry entry, Timestamp t)
{
    const auto histogram = timeline_->snapshot(clock_index_);
    entry.band = band_of(timeline_->band_edges(), entry.fee);
    entry.queued_at = t;
    entry.key = histogram.counts[entry.band] + timeline_->cumulative_outflow(clock_index_, entry.band);
    auto& queue = bands_[entry.band];
    if (entry.key <= timeline_->cumulative_outflow(clock_index_, entry.band)) {
        queue.ready.emplace(entry.queued_at, first);
    } else {
        queue.queued.emplace(entry.key, entry.queued_at, first);
    }
    pending_.insert_or_assign(first, entry);
}

void ReplayEngine::unlink(TxId first, const Entry& entry)
{
    auto& queue = bands_[entry.band];
    if (queue.queued.erase({entry.key, entry.queued_at, first}) == 0) queue.ready.erase({entry.queued_at, first});
}

std::map<TxId, ReplayEngine::Entry>::iterator ReplayEngine::split(std::map<TxId, Entry>::iterator it, std::uint64_t prefix)
{
    Entry& entry = it->second;
    if (prefix == 0 || prefix >= entry.count) return it;
    Entry rest = entry;
    rest.count = entry.count - prefix;
    rest.conflict.reset();
    entry.count = prefix;
    const TxId rest_first = it->first + prefix;
    auto& queue = bands_[entry.band];
    if (queue.ready.count({entry.queued_at, it->first})) {
        queue.ready.emplace(rest.queued_at, rest_first);
    } else {
        queue.queued.emplace(rest.key, rest.queued_at, rest_first);
    }
    pending_.emplace(rest_first, rest);
    return it;
}

std::map<TxId, ReplayEngine::Entry>::iterator ReplayEngine::isolate(TxId id)
{
    auto it = pending_.upper_bound(id);
    if (it == pending_.begin() || std::prev(it)->first + std::prev(it)->second.count <= id) {
        throw UsageError("transaction " + std::to_string(id) + " is not pending");
    }
    --it;
    if (it->first < id) {
        split(it, id - it->first);
        it = pending_.find(id);
    }
    return split(it, 1);
}

void ReplayEngine::settle(TxId first, const Entry& entry, std::uint64_t count, TxStatus status, std::optional<BlockHeight> height)
{
    settled_.insert_or_assign(first, Settled{count, entry.fee, entry.submitted_at, entry.queued_at, status, height});
}

void ReplayEngine::withdraw_entry(std::map<TxId, Entry>::iterator it)
{
    unlink(it->first, it->second);
    settle(it->first, it->second, it->second.count, TxStatus::Withdrawn, std::nullopt);
    pending_total_ -= it->second.count;
    pending_.erase(it);
}

void ReplayEngine::confirm_prefix(std::map<TxId, Entry>::iterator it, std::uint64_t count, BlockHeight height,
                                  std::vector<ConfirmedBatch>& out)
{
    split(it, count);
    const TxId first = it->first;
    const Entry entry = it->second;
    unlink(first, entry);
    settle(first, entry, entry.count, TxStatus::Confirmed, height);
    pending_total_ -= entry.count;
    pending_.erase(it);
    out.push_back({first, entry.count});

    if (entry.conflict) {
        if (auto partner = pending_.find(*entry.conflict); partner != pending_.end()) withdraw_entry(partner);
    }
}

MonitoredTx ReplayEngine::submit(TxId id, FeeRate fee, Timestamp t)
{
    submit_batch(id, 1, fee, t);
    return tx(id);
}

void ReplayEngine::submit_batch(TxId first, std::uint64_t count, FeeRate fee, Timestamp t)
{
    advance_clock(t);
    check_unused(first, count);
    Entry entry;
    entry.count = count;
    entry.fee = fee;
    entry.submitted_at = t;
    enqueue(first, entry, t);
    pending_total_ += count;
}

MonitoredTx ReplayEngine::bump(TxId id, FeeRate new_fee, Timestamp t)
{
    advance_clock(t);
    auto it = isolate(id);
    if (!(it->second.fee < new_fee)) {
        throw UsageError("bump of transaction " + std::to_string(id) + " does not increase its fee");
    }
    Entry entry = it->second;
    unlink(id, entry);
    entry.fee = new_fee;
    enqueue(id, entry, t);
    return tx(id);
}

std::uint64_t ReplayEngine::bump_range(TxId first, TxId last, const std::function<FeeRate(FeeRate)>& new_fee, Timestamp t)
{
    advance_clock(t);
    if (last <= first) return 0;

    auto it = pending_.upper_bound(first);
    if (it != pending_.begin() && std::prev(it)->first + std::prev(it)->second.count > first) --it;

    std::uint64_t bumped = 0;
    while (it != pending_.end() && it->first < last) {
        if (it->first < first) {
            split(it, first - it->first);
            it = pending_.find(first);
        }
        if (it->first + it->second.count > last) split(it, last - it->first);

        const FeeRate fee = new_fee(it->second.fee);
        if (it->second.fee < fee) {
            Entry entry = it->second;
            unlink(it->first, entry);
            entry.fee = fee;
            enqueue(it->first, entry, t);
            bumped += entry.count;
        }
        ++it;
    }
    return bumped;
}

void ReplayEngine::withdraw(TxId id)
{
    withdraw_entry(isolate(id));
}

void ReplayEngine::set_conflict(TxId a, TxId b)
{
    if (a == b) throw UsageError("a transaction cannot conflict with itself");
    isolate(a)->second.conflict = b;
    isolate(b)->second.conflict = a;
}

std::vector<ConfirmedBatch> ReplayEngine::process_block(const BlockEntry& block, const BlockCapacityMode& mode)
{
    if (last_height_ && block.height <= *last_height_) {
        throw UsageError("block " + std::to_string(block.height) + " replayed after " + std::to_string(*last_height_));
    }
    const std::size_t snapshot = advance_clock(block.timestamp);
    last_height_ = block.height;

    std::vector<ConfirmedBatch> confirmed;
    std::int64_t remaining = mode.capacity(block);
    const auto histogram = timeline_->snapshot(snapshot);

    std::int64_t above = 0; // historical txs in bands above the current one
    for (std::size_t b = bands_.size(); b-- > 0; above += histogram.counts[b]) {
        if (remaining <= 0) break;
        auto& queue = bands_[b];
        const std::int64_t drained = timeline_->cumulative_outflow(snapshot, b);

        while (!queue.queued.empty() && std::get<0>(*queue.queued.begin()) <= drained) {
            const auto [key, queued_at, first] = *queue.queued.begin();
            queue.queued.erase(queue.queued.begin());
            queue.ready.emplace(queued_at, first);
        }

        while (!queue.ready.empty() && above < remaining) {
            auto it = pending_.find(std::get<1>(*queue.ready.begin()));
            const auto take = std::min<std::uint64_t>(it->second.count, static_cast<std::uint64_t>(remaining - above));
            confirm_prefix(it, take, block.height, confirmed);
            remaining -= static_cast<std::int64_t>(take);
        }
        if (!queue.ready.empty()) continue;

        while (!queue.queued.empty()) {
            const auto [key, queued_at, first] = *queue.queued.begin();
            const std::int64_t ahead = above + (key - drained);
            if (ahead >= remaining) break;
            auto it = pending_.find(first);
            const auto take = std::min<std::uint64_t>(it->second.count, static_cast<std::uint64_t>(remaining - ahead));
            confirm_prefix(it, take, block.height, confirmed);
            remaining -= static_cast<std::int64_t>(take);
        }
    }
    return confirmed;
}

MonitoredTx ReplayEngine::tx(TxId id) const
{
    MonitoredTx out;
    out.id = id;
    if (auto it = pending_.upper_bound(id); it != pending_.begin() && std::prev(it)->first + std::prev(it)->second.count > id) {
        const Entry& entry = std::prev(it)->second;
        out.fee = entry.fee;
        out.submitted_at = entry.submitted_at;
        out.queued_at = entry.queued_at;
        out.same_band_ahead = std::max<std::int64_t>(0, entry.key - timeline_->cumulative_outflow(clock_index_, entry.band));
        out.status = TxStatus::Pending;
        return out;
    }
    if (auto it = settled_.upper_bound(id); it != settled_.begin() && std::prev(it)->first + std::prev(it)->second.count > id) {
        const Settled& s = std::prev(it)->second;
        out.fee = s.fee;
        out.submitted_at = s.submitted_at;
        out.queued_at = s.queued_at;
        out.status = s.status;
        out.confirmed_height = s.height;
        return out;
    }
    throw UsageError("unknown transaction " + std::to_string(id));
}

std::string event_log_line(BlockHeight height, std::span<const ConfirmedBatch> batches)
{
    std::string out = "{\"height\":" + std::to_string(height) + ",\"confirmed\":[";
    bool first = true;
    for (const auto& batch : batches) {
        for (std::uint64_t i = 0; i < batch.count; ++i) {
            if (!first) out += ',';
            first = false;
            out += std::to_string(batch.first + i);
        }
    }
    out += "]}";
    return out;
}

} // namespace lnme
