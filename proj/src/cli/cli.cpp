// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/cli.h>

#include <lnme/cut.h>
#include <lnme/doublespend.h>
#include <lnme/error.h>
#include <lnme/graph.h>
#include <lnme/mempool.h>
#include <lnme/scenario.h>
#include <lnme/zombie.h>

#include "manifest.h"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <optional>

namespace lnme::cli {
namespace {

using Json = nlohmann::ordered_json;

/// Collects inputs, parameters and outputs of one command, then writes the
/// outputs and their manifest into the output directory.
class Run {
public:
    Run(std::string command, const std::vector<std::string>& args, std::string out_dir) : out_dir_(std::move(out_dir))
    {
        manifest_.tool_version = VERSION;
        manifest_.command = std::move(command);
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--out") {
                ++i;
                continue;
            }
            if (args[i].rfind("--out=", 0) == 0) continue;
            manifest_.args.push_back(args[i]);
        }
    }

    std::string input(const std::string& path)
    {
        auto data = read_file(path);
        manifest_.inputs.push_back({path, sha256_hex(data)});
        return data;
    }

    void output(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
    Json& params() { return manifest_.parameters; }
    void seed(std::uint64_t value) { manifest_.seeds.push_back(value); }

    const RunManifest& commit()
    {
        std::error_code ec;
        std::filesystem::create_directories(out_dir_, ec);
        if (ec) throw DataError("cannot create output directory '" + out_dir_ + "': " + ec.message());
        for (const auto& [name, content] : files_) {
            write_file(path_of(name), content);
            manifest_.outputs.push_back({name, sha256_hex(content)});
        }
        write_file(path_of(MANIFEST_FILE), write_manifest_json(manifest_));
        return manifest_;
    }

private:
    std::string path_of(std::string_view name) const { return (std::filesystem::path(out_dir_) / name).string(); }

    std::string out_dir_;
    RunManifest manifest_;
    std::vector<std::pair<std::string, std::string>> files_;
};

FeeRate parse_fee(const std::string& text, std::string_view flag)
{
    try {
        return FeeRate::parse(text);
    } catch (const DataError&) {
        throw UsageError(fmt::format("{}: invalid fee rate '{}' (sat/vByte, at most two decimals)", flag, text));
    }
}

std::string btc(Satoshis sats) { return format_btc(sats * 1000); }

LnGraph load_graph(const std::string& path, const std::string& format, Run& run)
{
    const auto data = run.input(path);
    const std::string kind = format != "auto" ? format : (path.ends_with(".json") ? "lnd" : "csv");
    run.params()["graph"] = path;
    run.params()["format"] = kind;
    return kind == "lnd" ? parse_lnd_graph(data) : parse_edge_list(data);
}

struct ScenarioOptions {
    std::string preset{"custom"};
    std::string timeline;
    std::string blocks;
    std::optional<Timestamp> start;
    std::optional<std::size_t> max_blocks;
    std::optional<std::int64_t> avg_txs;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o)
{
    cmd->add_option("--scenario", o.preset, "Preset: 1 (Dec 2017), 2 (Jan 2022) or custom")
        ->check(CLI::IsMember({"1", "2", "custom"}));
    cmd->add_option("--timeline", o.timeline, "Mempool timeline CSV")->required();
    cmd->add_option("--blocks", o.blocks, "Block trace CSV")->required();
    cmd->add_option("--start", o.start, "Attack start, unix seconds (custom scenario)");
    cmd->add_option("--max-blocks", o.max_blocks, "Cap on replayed blocks");
    cmd->add_option("--avg-txs", o.avg_txs, "Constant transactions per block instead of the trace's counts");
}

Scenario build_scenario(const ScenarioOptions& o, Run& run)
{
    auto timeline = std::make_shared<const MempoolTimeline>(load_timeline(run.input(o.timeline)));
    auto blocks = std::make_shared<const BlockTrace>(load_block_trace(run.input(o.blocks)));

    Scenario s;
    s.max_blocks = o.max_blocks;
    if (o.preset == "custom") {
        if (!o.start) throw UsageError("--scenario custom needs --start");
        s.start = *o.start;
    } else {
        if (o.start) throw UsageError("--start only applies to --scenario custom");
        s.start = o.preset == "1" ? SCENARIO1_START : SCENARIO2_START;
    }

    Json capacity;
    if (o.avg_txs) {
        s.capacity = BlockCapacityMode::constant(*o.avg_txs);
        capacity = {{"mode", "constant"}, {"tx_per_block", *o.avg_txs}, {"source", "--avg-txs"}};
    } else if (o.preset == "2") {
        // The 2022 window replays with the mean block size of the 2017 window.
        const BlockHeight first = (*blocks)[0].height;
        const auto covered = static_cast<BlockHeight>(blocks->size());
        const auto window = static_cast<BlockHeight>(SCENARIO1_WINDOW_BLOCKS);
        if (SCENARIO1_FIRST_BLOCK < first || SCENARIO1_FIRST_BLOCK + window > first + covered) {
            throw UsageError(fmt::format("--scenario 2 needs --avg-txs or a block trace covering blocks {}..{}", SCENARIO1_FIRST_BLOCK,
                                         SCENARIO1_FIRST_BLOCK + window - 1));
        }
        const auto average = blocks->average_tx_count(static_cast<std::size_t>(SCENARIO1_FIRST_BLOCK - first), SCENARIO1_WINDOW_BLOCKS);
        s.capacity = BlockCapacityMode::constant(average);
        capacity = {{"mode", "constant"}, {"tx_per_block", average}, {"source", "scenario 1 window"}};
    } else {
        capacity = {{"mode", "historical"}};
    }
    s.timeline = std::move(timeline);
    s.blocks = std::move(blocks);

    auto& p = run.params();
    p["scenario"] = o.preset;
    p["timeline"] = o.timeline;
    p["blocks"] = o.blocks;
    p["start"] = s.start;
    p["max_blocks"] = o.max_blocks ? Json(*o.max_blocks) : Json(nullptr);
    p["block_capacity"] = capacity;
    return s;
}

Json strategy_json(const FeeStrategy& s)
{
    Json j;
    j["kind"] = s.bump ? "dynamic" : "static";
    j["initial_fee"] = s.initial.to_string();
    if (s.bump) {
        j["step"] = s.bump->step;
        j["beta"] = s.bump->beta;
    }
    return j;
}

// solve ----------------------------------------------------------------------

struct SolveOptions {
    std::string graph;
    std::string format{"auto"};
    std::optional<std::size_t> k;
    std::optional<std::size_t> k_max;
    std::string objective{"edge_count"};
    bool exact{false};
    std::uint64_t budget{DEFAULT_ENUMERATION_BUDGET};
};

int cmd_solve(const SolveOptions& o, Run& run, std::ostream& out)
{
    if (!o.k && !o.k_max) throw UsageError("solve needs --k or --k-max");
    const auto objective = parse_objective(o.objective);
    const auto graph = load_graph(o.graph, o.format, run);
    auto& p = run.params();
    p["objective"] = std::string(to_string(objective));
    p["k"] = o.k ? Json(*o.k) : Json(nullptr);
    p["k_max"] = o.k_max ? Json(*o.k_max) : Json(nullptr);
    p["solver"] = o.exact ? "exact" : "greedy";
    if (o.exact) p["budget"] = o.budget;
    out << fmt::format("graph: {} nodes, {} channels, {} sat\n", graph.node_count(), graph.channel_count(), graph.total_capacity());

    if (o.k_max) {
        if (*o.k_max > graph.node_count()) throw UsageError("--k-max exceeds the number of nodes");
        const auto curve = value_vs_k_curve(graph, *o.k_max, objective);
        run.output("curve.csv", write_curve_csv(curve));
        out << fmt::format("curve: {} rows\n", curve.size());
    }
    // Without --k the cut at k-max accompanies the curve.
    const std::size_t k = o.k.value_or(o.k_max.value_or(0));
    {
        Cut cut;
        if (o.exact) {
            cut = exact_lopsided_cut(graph, k, objective, {o.budget, 0});
        } else {
            cut = greedy_lopsided_cut(graph, k, objective).first;
            if (!o.k_max) run.output("curve.csv", write_curve_csv(prefix_curve(graph, cut.coalition)));
        }
        run.output("cut.json", write_cut_json(to_record(graph, cut)));
        out << fmt::format("k={} objective={} edge_count={} cut_capacity_sat={} cut_capacity_btc={}\n", cut.k(),
                           to_string(objective), cut.edge_count, cut.cut_capacity, btc(cut.cut_capacity));
    }
    return EXIT_OK;
}

// zombie ---------------------------------------------------------------------

struct ZombieOptions {
    std::optional<std::uint64_t> channels;
    std::string cut_file;
    std::string fee;
    bool dynamic{false};
    std::string initial_fee;
    std::optional<std::uint32_t> step;
    double beta{1.1};
    std::vector<std::string> fees;
    std::vector<std::uint32_t> steps;
    ScenarioOptions scenario;
    bool event_log{false};
};

std::vector<FeeStrategy> zombie_strategies(const ZombieOptions& o)
{
    std::vector<FeeStrategy> out;
    if (!o.fees.empty()) {
        if (o.dynamic || !o.fee.empty() || !o.steps.empty()) throw UsageError("--fees excludes --fee, --dynamic and --steps");
        for (const auto& f : o.fees) out.push_back(FeeStrategy::fixed(parse_fee(f, "--fees")));
        return out;
    }
    if (!o.dynamic) {
        if (!o.steps.empty()) throw UsageError("--steps needs --dynamic");
        if (o.fee.empty()) throw UsageError("zombie needs --fee, --fees or --dynamic");
        out.push_back(FeeStrategy::fixed(parse_fee(o.fee, "--fee")));
        return out;
    }
    if (!o.fee.empty()) throw UsageError("--fee and --dynamic are exclusive (use --initial-fee)");
    if (o.initial_fee.empty()) throw UsageError("--dynamic needs --initial-fee");
    const auto initial = parse_fee(o.initial_fee, "--initial-fee");
    if (!o.steps.empty()) {
        if (o.step) throw UsageError("--step and --steps are exclusive");
        for (auto s : o.steps) out.push_back(FeeStrategy::dynamic(initial, s, o.beta));
        return out;
    }
    if (!o.step) throw UsageError("--dynamic needs --step or --steps");
    out.push_back(FeeStrategy::dynamic(initial, *o.step, o.beta));
    return out;
}

int cmd_zombie(const ZombieOptions& o, Run& run, std::ostream& out)
{
    if (o.channels.has_value() == !o.cut_file.empty()) throw UsageError("give exactly one of --channels and --cut-file");
    const auto strategies = zombie_strategies(o);
    const bool sweep = !o.fees.empty() || !o.steps.empty();
    if (sweep && o.event_log) throw UsageError("--event-log applies to single runs only");

    auto& p = run.params();
    std::uint64_t channels = 0;
    if (o.channels) {
        channels = *o.channels;
    } else {
        channels = static_cast<std::uint64_t>(parse_cut_json(run.input(o.cut_file)).edge_count);
        p["cut_file"] = o.cut_file;
    }
    p["channels"] = channels;
    const auto scenario = build_scenario(o.scenario, run);

    if (!sweep) {
        p["strategy"] = strategy_json(strategies.front());
        ZombieConfig config{channels, strategies.front(), scenario, {}};
        std::string events;
        if (o.event_log) {
            config.on_block = [&events](BlockHeight h, std::span<const ConfirmedBatch> batches) {
                events += event_log_line(h, batches);
                events += '\n';
            };
        }
        const auto report = simulate_zombie(config);
        Json summary;
        summary["blocks_to_close_all"] = report.blocks_to_close_all ? Json(*report.blocks_to_close_all) : Json(nullptr);
        summary["horizon_exhausted"] = report.horizon_exhausted;
        summary["remaining"] = report.remaining();
        summary["blocks_replayed"] = report.series.size();
        summary["config"] = p;
        run.output("series.csv", write_zombie_series_csv(report));
        run.output("summary.json", summary.dump(2) + "\n");
        if (o.event_log) run.output("events.jsonl", std::move(events));
        if (report.blocks_to_close_all) {
            out << fmt::format("all {} channels closed after {} blocks\n", channels, *report.blocks_to_close_all);
        } else {
            out << fmt::format("horizon exhausted after {} blocks with {} of {} channels open\n", report.series.size(),
                               report.remaining(), channels);
        }
        return report.horizon_exhausted ? EXIT_EXHAUSTED : EXIT_OK;
    }

    auto list = Json::array();
    std::vector<ZombieConfig> configs;
    for (const auto& s : strategies) {
        list.push_back(strategy_json(s));
        configs.push_back({channels, s, scenario, {}});
    }
    p["strategies"] = list;
    const auto rows = sweep_zombie(configs);
    run.output("sweep.csv", write_zombie_sweep_csv(rows));
    std::size_t exhausted = 0;
    for (const auto& r : rows) exhausted += r.horizon_exhausted;
    out << fmt::format("{} runs, {} exhausted the horizon\n", rows.size(), exhausted);
    return exhausted > 0 ? EXIT_EXHAUSTED : EXIT_OK;
}

// doublespend ----------------------------------------------------------------

struct DoubleSpendOptions {
    std::string cut_file;
    std::string graph;
    std::string format{"auto"};
    std::vector<std::size_t> ks;
    std::string attacker_fee{"50"};
    std::string sweep_fee{"100"};
    bool sweep_dynamic{false};
    std::optional<std::uint32_t> sweep_step;
    double sweep_beta{1.1};
    std::string delay{"scaled"};
    std::optional<std::uint32_t> honest_step;
    double honest_beta{1.1};
    bool strict_expiry{false};
    std::string profit_mode{"average"};
    std::optional<Satoshis> avg_capacity;
    ScenarioOptions scenario;
    bool event_log{false};
};

DelayPolicy parse_delay(const std::string& text)
{
    if (text == "scaled") return CapacityScaledDelay{};
    if (text.rfind("fixed:", 0) == 0) {
        try {
            std::size_t used = 0;
            const auto blocks = std::stoll(text.substr(6), &used);
            if (used == text.size() - 6 && blocks >= 0) return FixedDelay{blocks};
        } catch (const std::exception&) {
        }
    }
    throw UsageError("--delay must be 'scaled' or 'fixed:<blocks>'");
}

Json delay_json(const DelayPolicy& policy)
{
    if (const auto* fixed = std::get_if<FixedDelay>(&policy)) return {{"kind", "fixed"}, {"blocks", fixed->blocks}};
    const auto& scaled = std::get<CapacityScaledDelay>(policy);
    return {{"kind", "scaled"}, {"max_funding_sat", scaled.max_funding}, {"max_delay", scaled.max_delay}, {"min_delay", scaled.min_delay}};
}

/// Mean capacity rounded half up; 0 for no channels.
Satoshis mean_capacity(Satoshis total, std::size_t count)
{
    return count == 0 ? 0 : static_cast<Satoshis>((2 * total + static_cast<Satoshis>(count)) / (2 * static_cast<Satoshis>(count)));
}

ProfitMode profit_mode(const DoubleSpendOptions& o, Satoshis fallback_capacity)
{
    if (o.profit_mode == "per-channel") {
        if (o.avg_capacity) throw UsageError("--avg-capacity applies to --profit-mode average");
        return PerChannelProfit{};
    }
    const Satoshis c = o.avg_capacity.value_or(fallback_capacity);
    if (c < 0) throw UsageError("--avg-capacity must be non-negative");
    return AverageCapacityProfit{c};
}

int cmd_doublespend(const DoubleSpendOptions& o, Run& run, std::ostream& out, std::ostream& err)
{
    if (o.cut_file.empty() == o.graph.empty()) throw UsageError("give exactly one of --cut-file and --graph");
    if (!o.graph.empty() && o.ks.empty()) throw UsageError("--graph needs --ks");
    if (!o.cut_file.empty() && !o.ks.empty()) throw UsageError("--ks needs --graph instead of --cut-file");
    if (!o.ks.empty() && o.event_log) throw UsageError("--event-log applies to single runs only");

    DoubleSpendConfig config;
    config.attacker.commitment_fee = parse_fee(o.attacker_fee, "--attacker-fee");
    const auto sweep_initial = parse_fee(o.sweep_fee, "--sweep-fee");
    if (o.sweep_dynamic) {
        if (!o.sweep_step) throw UsageError("--sweep-dynamic needs --sweep-step");
        config.attacker.sweep = FeeStrategy::dynamic(sweep_initial, *o.sweep_step, o.sweep_beta);
    } else {
        if (o.sweep_step) throw UsageError("--sweep-step needs --sweep-dynamic");
        config.attacker.sweep = FeeStrategy::fixed(sweep_initial);
    }
    if (o.honest_step) {
        config.honest_bump = BumpSchedule{*o.honest_step, o.honest_beta};
        validate(*config.honest_bump);
    }
    config.delay = parse_delay(o.delay);
    config.strict_expiry = o.strict_expiry;

    auto& p = run.params();
    p["attacker_fee"] = config.attacker.commitment_fee.to_string();
    p["sweep"] = strategy_json(config.attacker.sweep);
    p["honest_bump"] = config.honest_bump ? Json{{"step", config.honest_bump->step}, {"beta", config.honest_bump->beta}} : Json(nullptr);
    p["delay"] = delay_json(config.delay);
    p["strict_expiry"] = o.strict_expiry;
    config.scenario = build_scenario(o.scenario, run);

    if (!o.cut_file.empty()) {
        const auto record = parse_cut_json(run.input(o.cut_file));
        p["cut_file"] = o.cut_file;
        config.channels = attacked_channels(record);
        const auto mode = profit_mode(o, mean_capacity(record.cut_capacity_sat, record.cut_channels.size()));
        p["profit_mode"] = std::string(to_string(mode));
        if (const auto* avg = std::get_if<AverageCapacityProfit>(&mode)) p["avg_capacity_sat"] = avg->capacity;

        std::string events;
        if (o.event_log) {
            config.on_block = [&events](BlockHeight h, std::span<const ConfirmedBatch> batches) {
                events += event_log_line(h, batches);
                events += '\n';
            };
        }
        const auto report = simulate_double_spend(config);
        if (report.undecided > 0) {
            err << fmt::format("warning: {} channel(s) undecided when the trace ended; excluded from the profit\n", report.undecided);
        }
        const auto profit = realized_profit(report, mode, true);
        run.output("report.json", write_double_spend_json(report, profit, mode));
        run.output("compromised.csv", write_compromised_series_csv(report));
        if (o.event_log) run.output("events.jsonl", std::move(events));
        out << fmt::format("attacked={} compromised={} defended={} undecided={} profit_btc={}\n", report.attacked, report.compromised,
                           report.defended, report.undecided, format_btc(profit));
        return report.undecided > 0 ? EXIT_EXHAUSTED : EXIT_OK;
    }

    const auto graph = load_graph(o.graph, o.format, run);
    const auto mode = profit_mode(o, mean_capacity(graph.total_capacity(), graph.channel_count()));
    p["ks"] = o.ks;
    p["profit_mode"] = std::string(to_string(mode));
    if (const auto* avg = std::get_if<AverageCapacityProfit>(&mode)) p["avg_capacity_sat"] = avg->capacity;
    const auto rows = profit_vs_k(graph, o.ks, config, mode);
    std::size_t undecided_rows = 0;
    for (const auto& r : rows) {
        if (r.undecided == 0) continue;
        ++undecided_rows;
        err << fmt::format("warning: k={}: {} channel(s) undecided when the trace ended; excluded from the profit\n", r.k, r.undecided);
    }
    run.output("profit.csv", write_profit_csv(rows));
    out << fmt::format("{} rows\n", rows.size());
    return undecided_rows > 0 ? EXIT_EXHAUSTED : EXIT_OK;
}

// gen ------------------------------------------------------------------------

inline constexpr Timestamp DEFAULT_SYNTHETIC_START = 1'600'000'000;

struct GenGraphOptions {
    bool scale_free{true};
    std::size_t n{0};
    std::size_t m{0};
    std::uint64_t seed{1};
    Satoshis capacity{4'500'000};
    std::optional<Satoshis> capacity_min;
    std::optional<Satoshis> capacity_max;
};

int cmd_gen_graph(const GenGraphOptions& o, Run& run, std::ostream& out)
{
    CapacitySampler sampler = ConstantCapacity{o.capacity};
    auto& p = run.params();
    p["model"] = "scale_free";
    p["n"] = o.n;
    p["m"] = o.m;
    if (o.capacity_min || o.capacity_max) {
        if (!o.capacity_min || !o.capacity_max) throw UsageError("--capacity-min and --capacity-max go together");
        sampler = UniformCapacity{*o.capacity_min, *o.capacity_max};
        p["capacity"] = {{"kind", "uniform"}, {"min_sat", *o.capacity_min}, {"max_sat", *o.capacity_max}};
    } else {
        if (o.capacity < 0) throw UsageError("--capacity must be non-negative");
        p["capacity"] = {{"kind", "constant"}, {"sat", o.capacity}};
    }
    run.seed(o.seed);
    const auto graph = generate_scale_free(o.n, o.m, o.seed, sampler);
    run.output("graph.csv", write_edge_list(graph));
    out << fmt::format("graph: {} nodes, {} channels\n", graph.node_count(), graph.channel_count());
    return EXIT_OK;
}

struct GenTimelineOptions {
    bool constant{true};
    std::vector<std::string> bands;
    std::vector<std::int64_t> counts;
    Timestamp start{DEFAULT_SYNTHETIC_START};
    std::size_t snapshots{1441};
};

int cmd_gen_timeline(const GenTimelineOptions& o, Run& run, std::ostream& out)
{
    std::vector<FeeRate> edges;
    if (o.bands.empty()) {
        edges = default_band_edges();
    } else {
        for (const auto& b : o.bands) edges.push_back(parse_fee(b, "--bands"));
    }
    std::vector<std::int64_t> counts = o.counts;
    if (counts.empty()) counts.assign(edges.size(), 0);
    if (counts.size() == 1) counts.assign(edges.size(), counts.front());
    if (counts.size() != edges.size()) {
        throw UsageError(fmt::format("--count needs one value or one per band ({} bands)", edges.size()));
    }
    for (auto c : counts) {
        if (c < 0) throw UsageError("--count values must be non-negative");
    }
    const auto timeline = [&] {
        try {
            return constant_timeline(edges, counts, o.start, o.snapshots);
        } catch (const DataError& e) {
            throw UsageError(e.what());
        }
    }();
    auto& p = run.params();
    p["model"] = "constant";
    auto band_text = Json::array();
    for (const auto& e : edges) band_text.push_back(e.to_string());
    p["bands"] = band_text;
    p["counts"] = counts;
    p["start"] = o.start;
    p["snapshots"] = o.snapshots;
    run.output("timeline.csv", write_timeline(timeline));
    out << fmt::format("timeline: {} snapshots x {} bands from {}\n", timeline.size(), timeline.band_count(), o.start);
    return EXIT_OK;
}

struct GenBlocksOptions {
    std::size_t count{0};
    std::int64_t txs{0};
    std::int64_t interval{600};
    BlockHeight first_height{1};
    Timestamp start{DEFAULT_SYNTHETIC_START};
};

int cmd_gen_blocks(const GenBlocksOptions& o, Run& run, std::ostream& out)
{
    if (o.count == 0) throw UsageError("--count must be at least 1");
    if (o.txs < 0) throw UsageError("--txs must be non-negative");
    if (o.interval < 0) throw UsageError("--interval must be non-negative");
    auto& p = run.params();
    p["count"] = o.count;
    p["txs"] = o.txs;
    p["interval"] = o.interval;
    p["first_height"] = o.first_height;
    p["start"] = o.start;
    const auto trace = uniform_block_trace(o.first_height, o.start, o.count, o.txs, o.interval);
    run.output("blocks.csv", write_block_trace(trace));
    out << fmt::format("blocks: {}..{}\n", trace[0].height, trace[trace.size() - 1].height);
    return EXIT_OK;
}

// dispatch -------------------------------------------------------------------

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, RunManifest* produced);

int cmd_rerun(const std::string& manifest_path, const std::string& out_dir, std::ostream& out, std::ostream& err)
{
    const auto recorded = parse_manifest_json(read_file(manifest_path));
    for (const auto& input : recorded.inputs) {
        if (sha256_hex(read_file(input.path)) != input.sha256) {
            throw DataError("input '" + input.path + "' changed since the recorded run");
        }
    }
    if (recorded.args.empty() || recorded.args.front() == "rerun") throw DataError("manifest does not describe a rerunnable command");
    auto args = recorded.args;
    args.push_back("--out");
    args.push_back(out_dir);

    RunManifest produced;
    const int code = execute(args, out, err, &produced);
    if (code != EXIT_OK && code != EXIT_EXHAUSTED) return code;

    bool identical = produced.outputs.size() == recorded.outputs.size() && produced.tool_version == recorded.tool_version;
    for (std::size_t i = 0; identical && i < produced.outputs.size(); ++i) {
        identical = produced.outputs[i].path == recorded.outputs[i].path && produced.outputs[i].sha256 == recorded.outputs[i].sha256;
    }
    if (!identical) {
        err << "error: rerun outputs differ from the manifest\n";
        return EXIT_DATA;
    }
    out << fmt::format("rerun reproduced {} output(s) bit-identically\n", produced.outputs.size());
    return code;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, RunManifest* produced)
{
    CLI::App app{"Lightning Network mass-exit toolkit: cut solver, zombie and double-spend simulators", "lnme"};
    app.set_version_flag("--version", VERSION);
    app.require_subcommand(1);
    std::string out_dir{"."};

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "Greedy (or exact) k-lopsided max-cut");
    solve->add_option("--graph", so.graph, "lnd describegraph JSON or edge-list CSV")->required();
    solve->add_option("--format", so.format, "auto, lnd or csv")->check(CLI::IsMember({"auto", "lnd", "csv"}));
    solve->add_option("--k", so.k, "Coalition size");
    solve->add_option("--k-max", so.k_max, "Write the value-vs-k curve for k = 1..k-max");
    solve->add_option("--objective", so.objective, "edge_count (lmc) or capacity (lwmc)");
    solve->add_flag("--exact", so.exact, "Exhaustive search instead of greedy");
    solve->add_option("--budget", so.budget, "Maximum subsets the exact search may visit");
    solve->add_option("--out", out_dir, "Output directory");

    ZombieOptions zo;
    auto* zombie = app.add_subcommand("zombie", "Mass force-close under historical congestion");
    zombie->add_option("--channels", zo.channels, "Number of channels to close");
    zombie->add_option("--cut-file", zo.cut_file, "Cut JSON; its edge count is the channel count");
    zombie->add_option("--fee", zo.fee, "Static fee, sat/vByte");
    zombie->add_flag("--dynamic", zo.dynamic, "Bump fees every --step blocks by --beta");
    zombie->add_option("--initial-fee", zo.initial_fee, "Initial fee of the dynamic strategy");
    zombie->add_option("--step", zo.step, "Blocks between bumps");
    zombie->add_option("--beta", zo.beta, "Bump multiplier (> 1)");
    zombie->add_option("--fees", zo.fees, "Static fee sweep, comma separated")->delimiter(',');
    zombie->add_option("--steps", zo.steps, "Dynamic step sweep, comma separated")->delimiter(',');
    zombie->add_flag("--event-log", zo.event_log, "Also write events.jsonl");
    add_scenario_options(zombie, zo.scenario);
    zombie->add_option("--out", out_dir, "Output directory");

    DoubleSpendOptions dso;
    auto* ds = app.add_subcommand("doublespend", "Mass double-spend race between penalties and sweeps");
    ds->add_option("--cut-file", dso.cut_file, "Cut JSON whose channels are attacked");
    ds->add_option("--graph", dso.graph, "Graph for a profit-vs-k table (with --ks)");
    ds->add_option("--format", dso.format, "auto, lnd or csv")->check(CLI::IsMember({"auto", "lnd", "csv"}));
    ds->add_option("--ks", dso.ks, "Coalition sizes, comma separated")->delimiter(',');
    ds->add_option("--attacker-fee", dso.attacker_fee, "Commitment fee, sat/vByte");
    ds->add_option("--sweep-fee", dso.sweep_fee, "Sweep fee (initial fee when dynamic)");
    ds->add_flag("--sweep-dynamic", dso.sweep_dynamic, "Bump sweeps every --sweep-step blocks");
    ds->add_option("--sweep-step", dso.sweep_step, "Blocks between sweep bumps");
    ds->add_option("--sweep-beta", dso.sweep_beta, "Sweep bump multiplier (> 1)");
    ds->add_option("--delay", dso.delay, "scaled or fixed:<blocks>");
    ds->add_option("--honest-step", dso.honest_step, "Bump penalties every N blocks");
    ds->add_option("--honest-beta", dso.honest_beta, "Penalty bump multiplier (> 1)");
    ds->add_flag("--strict-expiry", dso.strict_expiry, "Penalties become invalid when the delay expires");
    ds->add_option("--profit-mode", dso.profit_mode, "average or per-channel")->check(CLI::IsMember({"average", "per-channel"}));
    ds->add_option("--avg-capacity", dso.avg_capacity, "Capacity c for the average profit formula, sat");
    ds->add_flag("--event-log", dso.event_log, "Also write events.jsonl");
    add_scenario_options(ds, dso.scenario);
    ds->add_option("--out", out_dir, "Output directory");

    auto* gen = app.add_subcommand("gen", "Synthetic inputs");
    gen->require_subcommand(1);
    GenGraphOptions ggo;
    auto* gen_graph = gen->add_subcommand("graph", "Preferential-attachment graph as edge-list CSV");
    gen_graph->add_flag("--scale-free", ggo.scale_free, "Preferential attachment (the only model)");
    gen_graph->add_option("--n", ggo.n, "Nodes")->required();
    gen_graph->add_option("--m", ggo.m, "Channels per new node")->required();
    gen_graph->add_option("--seed", ggo.seed, "RNG seed");
    gen_graph->add_option("--capacity", ggo.capacity, "Constant capacity, sat");
    gen_graph->add_option("--capacity-min", ggo.capacity_min, "Uniform capacity lower bound, sat");
    gen_graph->add_option("--capacity-max", ggo.capacity_max, "Uniform capacity upper bound, sat");
    gen_graph->add_option("--out", out_dir, "Output directory");
    GenTimelineOptions gto;
    auto* gen_timeline = gen->add_subcommand("timeline", "Constant mempool timeline CSV");
    gen_timeline->add_flag("--constant", gto.constant, "Same histogram in every snapshot (the only model)");
    gen_timeline->add_option("--bands", gto.bands, "Band lower edges, sat/vByte, comma separated")->delimiter(',');
    gen_timeline->add_option("--count", gto.counts, "Count per band, or one value for all")->delimiter(',');
    gen_timeline->add_option("--start", gto.start, "First snapshot, unix seconds");
    gen_timeline->add_option("--snapshots", gto.snapshots, "Number of one-minute snapshots");
    gen_timeline->add_option("--out", out_dir, "Output directory");
    GenBlocksOptions gbo;
    auto* gen_blocks = gen->add_subcommand("blocks", "Uniform block trace CSV");
    gen_blocks->add_option("--count", gbo.count, "Blocks")->required();
    gen_blocks->add_option("--txs", gbo.txs, "Transactions per block")->required();
    gen_blocks->add_option("--interval", gbo.interval, "Seconds between blocks");
    gen_blocks->add_option("--first-height", gbo.first_height, "Height of the first block");
    gen_blocks->add_option("--start", gbo.start, "Timestamp of the first block");
    gen_blocks->add_option("--out", out_dir, "Output directory");

    std::string manifest_path;
    auto* rerun = app.add_subcommand("rerun", "Repeat a run from its manifest and verify the outputs");
    rerun->add_option("manifest", manifest_path, "manifest.json of the earlier run")->required();
    rerun->add_option("--out", out_dir, "Output directory for the repeated run")->required();

    std::vector<std::string> argv_text{"lnme"};
    argv_text.insert(argv_text.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_text) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? EXIT_OK : EXIT_USAGE;
    }

    std::unique_ptr<Run> run;
    const auto start_run = [&](std::string command) {
        run = std::make_unique<Run>(std::move(command), args, out_dir);
        return std::ref(*run);
    };
    try {
        int code = EXIT_OK;
        if (*rerun) return cmd_rerun(manifest_path, out_dir, out, err);
        if (*solve) code = cmd_solve(so, start_run("solve"), out);
        if (*zombie) code = cmd_zombie(zo, start_run("zombie"), out);
        if (*ds) code = cmd_doublespend(dso, start_run("doublespend"), out, err);
        if (*gen_graph) code = cmd_gen_graph(ggo, start_run("gen graph"), out);
        if (*gen_timeline) code = cmd_gen_timeline(gto, start_run("gen timeline"), out);
        if (*gen_blocks) code = cmd_gen_blocks(gbo, start_run("gen blocks"), out);
        const auto& manifest = run->commit();
        if (produced) *produced = manifest;
        return code;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << "\n";
        try {
            if (run) run->commit();
        } catch (const Error& write_error) {
            err << "error: " << write_error.what() << "\n";
            return EXIT_DATA;
        }
        return EXIT_EXHAUSTED;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_DATA;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return EXIT_DATA;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    return execute(args, out, err, nullptr);
}

} // namespace lnme::cli
