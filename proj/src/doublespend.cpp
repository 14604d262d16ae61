// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/doublespend.h>

#include <lnme/error.h>
#include <lnme/parallel.h>
#include <lnme/replay.h>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace lnme {

std::int64_t to_self_delay(Satoshis capacity, const DelayPolicy& policy)
{
    if (capacity < 0) throw UsageError("capacity must be non-negative");
    if (const auto* fixed = std::get_if<FixedDelay>(&policy)) {
        if (fixed->blocks < 0) throw UsageError("delay must be non-negative");
        return fixed->blocks;
    }
    const auto& scaled = std::get<CapacityScaledDelay>(policy);
    if (scaled.max_funding <= 0 || scaled.min_delay < 0 || scaled.max_delay < scaled.min_delay) {
        throw UsageError("invalid capacity-scaled delay parameters");
    }
    const __int128 twice = 2 * static_cast<__int128>(capacity) * scaled.max_delay;
    const auto rounded = static_cast<std::int64_t>((twice + scaled.max_funding) / (2 * static_cast<__int128>(scaled.max_funding)));
    return std::clamp(rounded, scaled.min_delay, scaled.max_delay);
}

std::vector<AttackedChannel> attacked_channels(const LnGraph& graph, const Cut& cut)
{
    std::vector<AttackedChannel> out;
    out.reserve(cut.cut_channels.size());
    for (ChannelIndex ci : cut.cut_channels) out.push_back({graph.channel(ci).id, graph.channel(ci).capacity});
    return out;
}

std::vector<AttackedChannel> attacked_channels(const CutRecord& record)
{
    std::vector<AttackedChannel> out;
    out.reserve(record.cut_channels.size());
    for (const auto& c : record.cut_channels) out.push_back({c.id, c.capacity});
    return out;
}

std::string_view to_string(Outcome outcome)
{
    switch (outcome) {
    case Outcome::Compromised: return "compromised";
    case Outcome::Defended: return "defended";
    case Outcome::Undecided: break;
    }
    return "undecided";
}

DoubleSpendReport simulate_double_spend(const DoubleSpendConfig& config)
{
    if (config.honest_bump) validate(*config.honest_bump);
    if (config.attacker.sweep.bump) validate(*config.attacker.sweep.bump);

    const auto window = replay_window(config.scenario);
    const auto& timeline = *config.scenario.timeline;
    const auto& blocks = *config.scenario.blocks;
    const std::size_t a = config.channels.size();

    DoubleSpendReport report;
    report.attacked = a;
    report.per_channel.resize(a);
    for (std::size_t i = 0; i < a; ++i) {
        auto& c = report.per_channel[i];
        c.id = config.channels[i].id;
        c.capacity = config.channels[i].capacity;
        c.delay = to_self_delay(c.capacity, config.delay);
    }
    if (a == 0) return report;

    // Commitment of channel i is id i, its penalty a + i, its sweep 2a + i.
    const auto commitment_id = [](std::size_t i) { return static_cast<TxId>(i); };
    const auto penalty_id = [a](std::size_t i) { return static_cast<TxId>(a + i); };
    const auto sweep_id = [a](std::size_t i) { return static_cast<TxId>(2 * a + i); };

    ReplayEngine engine(timeline);
    engine.submit_batch(commitment_id(0), a, config.attacker.commitment_fee, config.scenario.start);

    std::map<BlockHeight, std::vector<std::size_t>> sweeps_due;
    // height -> (tx id, true for a penalty / false for a sweep)
    std::map<BlockHeight, std::vector<std::pair<TxId, bool>>> bumps_due;
    std::size_t decided = 0;

    const auto decide = [&](std::size_t i, Outcome outcome, BlockHeight height) {
        auto& c = report.per_channel[i];
        if (c.outcome != Outcome::Undecided) return;
        c.outcome = outcome;
        c.decided_height = height;
        ++decided;
        if (outcome == Outcome::Compromised) ++report.compromised;
        else ++report.defended;
    };

    for (std::size_t b = window.begin; b < window.end && decided < a; ++b) {
        const auto& block = blocks[b];
        const auto h = block.height;
        const auto confirmed = engine.process_block(block, config.scenario.capacity);
        if (config.on_block) config.on_block(h, confirmed);

        for (const auto& batch : confirmed) {
            for (TxId id = batch.first; id < batch.first + batch.count; ++id) {
                if (id < a) {
                    const std::size_t i = id;
                    auto& c = report.per_channel[i];
                    c.commitment_height = h;
                    c.penalty_fee = average_fee(timeline.snapshot_at(block.timestamp));
                    engine.submit(penalty_id(i), *c.penalty_fee, block.timestamp);
                    sweeps_due[h + c.delay].push_back(i);
                    if (config.honest_bump) bumps_due[h + config.honest_bump->step].push_back({penalty_id(i), true});
                } else if (id < 2 * a) {
                    decide(id - a, Outcome::Defended, h);
                } else {
                    decide(id - 2 * a, Outcome::Compromised, h);
                }
            }
        }

        if (auto due = sweeps_due.find(h); due != sweeps_due.end()) {
            for (std::size_t i : due->second) {
                if (engine.tx(penalty_id(i)).status != TxStatus::Pending) continue;
                report.per_channel[i].sweep_submitted = h;
                engine.submit(sweep_id(i), config.attacker.sweep.initial, block.timestamp);
                if (config.strict_expiry) {
                    engine.withdraw(penalty_id(i));
                } else {
                    engine.set_conflict(penalty_id(i), sweep_id(i));
                }
                if (config.attacker.sweep.bump) bumps_due[h + config.attacker.sweep.bump->step].push_back({sweep_id(i), false});
            }
            sweeps_due.erase(due);
        }

        if (auto due = bumps_due.find(h); due != bumps_due.end()) {
            for (const auto& [id, honest] : due->second) {
                const auto tx = engine.tx(id);
                if (tx.status != TxStatus::Pending) continue;
                const auto& schedule = honest ? *config.honest_bump : *config.attacker.sweep.bump;
                const FeeRate fee = tx.fee.scaled(schedule.beta);
                if (tx.fee < fee) engine.bump(id, fee, block.timestamp);
                bumps_due[h + schedule.step].push_back({id, honest});
            }
            bumps_due.erase(due);
        }

        report.series.push_back({h, report.compromised});
    }

    report.undecided = a - decided;
    return report;
}

MilliSatoshis realized_profit(const DoubleSpendReport& report, const ProfitMode& mode, bool exclude_undecided)
{
    if (report.undecided > 0 && !exclude_undecided) {
        throw UsageError(std::to_string(report.undecided) + " undecided channels; exclude them explicitly to compute profit");
    }
    const auto n = static_cast<__int128>(report.compromised);
    const auto attacked = static_cast<__int128>(report.compromised + report.defended);

    __int128 msat = 0;
    if (const auto* average = std::get_if<AverageCapacityProfit>(&mode)) {
        // c/2 * n - c/2 * (a - n) = c * (2n - a) / 2
        msat = static_cast<__int128>(average->capacity) * (2 * n - attacked) * 500;
    } else {
        for (const auto& c : report.per_channel) {
            if (c.outcome == Outcome::Compromised) msat += static_cast<__int128>(c.capacity) * 500;
            if (c.outcome == Outcome::Defended) msat -= static_cast<__int128>(c.capacity) * 500;
        }
    }
    if (msat > std::numeric_limits<MilliSatoshis>::max() || msat < std::numeric_limits<MilliSatoshis>::min()) {
        throw DataError("profit overflows 64-bit millisatoshis");
    }
    return static_cast<MilliSatoshis>(msat);
}

double expected_profit(Satoshis cut_capacity, double p)
{
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("success probability must lie in [0, 1]");
    return (p - 0.5) * static_cast<double>(cut_capacity);
}

std::vector<ProfitRow> profit_vs_k(const LnGraph& graph, std::span<const std::size_t> ks, const DoubleSpendConfig& base,
                                   const ProfitMode& mode, unsigned threads)
{
    std::vector<ProfitRow> rows(ks.size());
    const std::size_t k_max = ks.empty() ? 0 : *std::max_element(ks.begin(), ks.end());
    if (k_max > graph.node_count()) throw UsageError("k exceeds the number of nodes");
    std::vector<NodeIndex> order;
    if (k_max > 0) order = greedy_lopsided_cut(graph, k_max, Objective::Capacity).first.coalition;

    parallel_for(ks.size(), threads, [&](std::size_t i) {
        const std::size_t k = ks[i];
        rows[i].k = k;
        if (k == 0) return;
        const Cut cut = make_cut(graph, std::span<const NodeIndex>(order).first(k), Objective::Capacity);
        DoubleSpendConfig config = base;
        config.channels = attacked_channels(graph, cut);
        const auto report = simulate_double_spend(config);
        rows[i].attacked = report.attacked;
        rows[i].compromised = report.compromised;
        rows[i].defended = report.defended;
        rows[i].undecided = report.undecided;
        rows[i].profit = realized_profit(report, mode, true);
    });
    return rows;
}

std::string_view to_string(const ProfitMode& mode)
{
    return std::holds_alternative<AverageCapacityProfit>(mode) ? "average" : "per_channel";
}

std::string format_btc(MilliSatoshis msat)
{
    const MilliSatoshis sats = msat / 1000;
    const auto magnitude = static_cast<std::uint64_t>(sats < 0 ? -sats : sats);
    return fmt::format("{}{}.{:08}", sats < 0 ? "-" : "", magnitude / SATS_PER_BTC, magnitude % SATS_PER_BTC);
}

namespace {

nlohmann::ordered_json optional_json(const std::optional<BlockHeight>& value)
{
    return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
}

} // namespace

std::string write_double_spend_json(const DoubleSpendReport& report, std::optional<MilliSatoshis> profit, const ProfitMode& mode)
{
    nlohmann::ordered_json doc;
    doc["attacked"] = report.attacked;
    doc["compromised"] = report.compromised;
    doc["defended"] = report.defended;
    doc["undecided"] = report.undecided;
    if (profit) {
        doc["realized_profit_sat"] = *profit / 1000;
        doc["realized_profit_msat"] = *profit;
        doc["realized_profit_btc"] = format_btc(*profit);
    } else {
        doc["realized_profit_sat"] = nullptr;
    }
    doc["profit_mode"] = std::string(to_string(mode));
    if (const auto* average = std::get_if<AverageCapacityProfit>(&mode)) doc["avg_capacity_sat"] = average->capacity;
    auto channels = nlohmann::ordered_json::array();
    for (const auto& c : report.per_channel) {
        nlohmann::ordered_json row;
        row["id"] = c.id;
        row["capacity_sat"] = c.capacity;
        row["delay"] = c.delay;
        row["outcome"] = std::string(to_string(c.outcome));
        row["commitment_height"] = optional_json(c.commitment_height);
        row["penalty_fee"] = c.penalty_fee ? nlohmann::ordered_json(c.penalty_fee->to_string()) : nlohmann::ordered_json(nullptr);
        row["sweep_submitted"] = optional_json(c.sweep_submitted);
        row["decided_height"] = optional_json(c.decided_height);
        channels.push_back(std::move(row));
    }
    doc["per_channel"] = std::move(channels);
    return doc.dump(2) + "\n";
}

std::string write_compromised_series_csv(const DoubleSpendReport& report)
{
    std::string out = "height,cumulative_compromised\n";
    for (const auto& p : report.series) out += fmt::format("{},{}\n", p.height, p.compromised);
    return out;
}

std::string write_profit_csv(std::span<const ProfitRow> rows)
{
    std::string out = "k,attacked,compromised,defended,undecided,profit_sat,profit_btc\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{}\n", r.k, r.attacked, r.compromised, r.defended, r.undecided, r.profit / 1000,
                           format_btc(r.profit));
    }
    return out;
}

} // namespace lnme
