// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/zombie.h>

#include <lnme/error.h>
#include <lnme/parallel.h>
#include <lnme/replay.h>

#include <fmt/format.h>

namespace lnme {

std::uint64_t ZombieReport::remaining() const
{
    return series.empty() ? 0 : series.back().remaining;
}

ZombieReport simulate_zombie(const ZombieConfig& config)
{
    if (config.channel_count < 1) throw UsageError("zombie simulation needs at least one channel");
    if (config.strategy.bump) validate(*config.strategy.bump);

    const auto window = replay_window(config.scenario);
    const auto& blocks = *config.scenario.blocks;
    const auto n = config.channel_count;

    ReplayEngine engine(*config.scenario.timeline);
    engine.submit_batch(0, n, config.strategy.initial, config.scenario.start);

    ZombieReport report;
    report.series.reserve(window.size());
    for (std::size_t i = window.begin; i < window.end; ++i) {
        const auto& block = blocks[i];
        const auto confirmed = engine.process_block(block, config.scenario.capacity);
        if (config.on_block) config.on_block(block.height, confirmed);
        report.series.push_back({block.height, engine.pending_count()});
        const std::size_t elapsed = i - window.begin + 1;
        if (engine.pending_count() == 0) {
            report.blocks_to_close_all = elapsed;
            return report;
        }
        if (const auto& bump = config.strategy.bump; bump && elapsed % bump->step == 0) {
            const double beta = bump->beta;
            engine.bump_range(0, n, [beta](FeeRate fee) { return fee.scaled(beta); }, block.timestamp);
        }
    }
    report.horizon_exhausted = true;
    return report;
}

std::vector<ZombieSweepRow> sweep_zombie(std::span<const ZombieConfig> configs, unsigned threads)
{
    if (configs.empty()) throw UsageError("zombie sweep needs at least one configuration");
    std::vector<ZombieSweepRow> rows(configs.size());
    parallel_for(configs.size(), threads, [&](std::size_t i) {
        const auto report = simulate_zombie(configs[i]);
        rows[i] = {configs[i].channel_count, configs[i].strategy, report.blocks_to_close_all, report.horizon_exhausted};
    });
    return rows;
}

std::string write_zombie_series_csv(const ZombieReport& report)
{
    std::string out = "height,remaining\n";
    for (const auto& p : report.series) out += fmt::format("{},{}\n", p.height, p.remaining);
    return out;
}

std::string write_zombie_sweep_csv(std::span<const ZombieSweepRow> rows)
{
    std::string out = "channels,strategy,initial_fee,step,beta,blocks_to_close_all,horizon_exhausted\n";
    for (const auto& row : rows) {
        const auto& s = row.strategy;
        out += fmt::format("{},{},{},{},{},{},{}\n", row.channel_count, s.bump ? "dynamic" : "static", s.initial.to_string(),
                           s.bump ? fmt::format("{}", s.bump->step) : std::string(),
                           s.bump ? fmt::format("{}", s.bump->beta) : std::string(),
                           row.blocks_to_close_all ? fmt::format("{}", *row.blocks_to_close_all) : std::string(),
                           row.horizon_exhausted ? "true" : "false");
    }
    return out;
}

} // namespace lnme
