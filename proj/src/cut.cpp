// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/cut.h>

#include <lnme/error.h>
#include <lnme/parallel.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <queue>

namespace lnme {

std::string_view to_string(Objective objective)
{
    return objective == Objective::EdgeCount ? "edge_count" : "capacity";
}

Objective parse_objective(std::string_view name)
{
    if (name == "edges" || name == "edge_count" || name == "lmc") return Objective::EdgeCount;
    if (name == "capacity" || name == "lwmc") return Objective::Capacity;
    throw UsageError("unknown objective '" + std::string(name) + "' (expected edges or capacity)");
}

namespace {

std::vector<char> membership(const LnGraph& graph, std::span<const NodeIndex> coalition)
{
    std::vector<char> in(graph.node_count(), 0);
    for (NodeIndex v : coalition) {
        if (v >= graph.node_count()) throw DataError("coalition member " + std::to_string(v) + " is not a node of the graph");
        in[v] = 1;
    }
    return in;
}

} // namespace

CutValue cut_value(const LnGraph& graph, std::span<const NodeIndex> coalition)
{
    const auto in = membership(graph, coalition);
    CutValue value;
    for (const auto& c : graph.channels()) {
        if (in[c.node_a] != in[c.node_b]) {
            ++value.edge_count;
            value.cut_capacity += c.capacity;
        }
    }
    return value;
}

Cut make_cut(const LnGraph& graph, std::span<const NodeIndex> coalition, Objective objective)
{
    const auto in = membership(graph, coalition);
    Cut cut;
    cut.objective = objective;
    cut.coalition.assign(coalition.begin(), coalition.end());
    for (ChannelIndex i = 0; i < graph.channel_count(); ++i) {
        const auto& c = graph.channel(i);
        if (in[c.node_a] != in[c.node_b]) {
            cut.cut_channels.push_back(i);
            ++cut.edge_count;
            cut.cut_capacity += c.capacity;
        }
    }
    return cut;
}

std::pair<Cut, GreedyTrace> greedy_lopsided_cut(const LnGraph& graph, std::size_t k, Objective objective)
{
    const std::size_t n = graph.node_count();
    if (k < 1 || k > n) {
        throw UsageError("coalition size k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }

    std::vector<std::int64_t> gain(n, 0);
    for (const auto& c : graph.channels()) {
        const auto w = objective_weight(c, objective);
        gain[c.node_a] += w;
        gain[c.node_b] += w;
    }

    struct Entry {
        std::int64_t gain;
        NodeIndex node;
    };
    // Max gain first, then the smallest index.
    auto lower_priority = [](const Entry& x, const Entry& y) {
        return x.gain != y.gain ? x.gain < y.gain : x.node > y.node;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(lower_priority)> heap(lower_priority);
    for (NodeIndex v = 0; v < n; ++v) heap.push({gain[v], v});

    std::vector<char> in(n, 0);
    std::vector<NodeIndex> chosen;
    chosen.reserve(k);
    GreedyTrace trace;
    trace.reserve(k);
    std::int64_t total = 0;

    while (chosen.size() < k) {
        const Entry top = heap.top();
        heap.pop();
        if (in[top.node] || top.gain != gain[top.node]) continue; // stale

        const NodeIndex u = top.node;
        in[u] = 1;
        chosen.push_back(u);
        total += top.gain;
        trace.push_back({chosen.size(), u, top.gain, total});

        // A channel u-v with v still on the right flips from "to right" to
        // "to coalition" from v's point of view.
        for (ChannelIndex ci : graph.incident(u)) {
            const auto& c = graph.channel(ci);
            const NodeIndex v = c.other(u);
            if (in[v]) continue;
            gain[v] -= 2 * objective_weight(c, objective);
            heap.push({gain[v], v});
        }
    }

    Cut cut = make_cut(graph, chosen, objective);
    return {std::move(cut), std::move(trace)};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(result);
}

namespace {

struct ExactBest {
    bool found{false};
    std::int64_t value{0};
    std::vector<NodeIndex> members;
};

std::int64_t subset_value(const LnGraph& graph, std::span<const NodeIndex> members, std::vector<char>& in, Objective objective)
{
    for (NodeIndex v : members) in[v] = 1;
    std::int64_t value = 0;
    for (NodeIndex v : members) {
        for (ChannelIndex ci : graph.incident(v)) {
            const auto& c = graph.channel(ci);
            if (!in[c.other(v)]) value += objective_weight(c, objective);
        }
    }
    for (NodeIndex v : members) in[v] = 0;
    return value;
}

// All k-subsets whose smallest element is `first`, in lexicographic order.
ExactBest enumerate_with_first(const LnGraph& graph, std::size_t k, NodeIndex first, Objective objective)
{
    const std::size_t n = graph.node_count();
    std::vector<char> in(n, 0);
    std::vector<NodeIndex> members(k);
    members[0] = first;
    for (std::size_t i = 1; i < k; ++i) members[i] = static_cast<NodeIndex>(first + i);

    ExactBest best;
    while (true) {
        const auto value = subset_value(graph, members, in, objective);
        if (!best.found || value > best.value) {
            best.found = true;
            best.value = value;
            best.members = members;
        }
        // Rightmost position (never the fixed first one) that can still grow.
        std::size_t pos = k - 1;
        while (pos >= 1 && members[pos] == n - k + pos) --pos;
        if (pos == 0) return best;
        ++members[pos];
        for (std::size_t j = pos + 1; j < k; ++j) members[j] = members[j - 1] + 1;
    }
}

} // namespace

Cut exact_lopsided_cut(const LnGraph& graph, std::size_t k, Objective objective, const ExactOptions& options)
{
    const std::size_t n = graph.node_count();
    if (k > n) throw UsageError("coalition size k=" + std::to_string(k) + " exceeds node count " + std::to_string(n));
    const auto subsets = binomial(n, k);
    if (subsets > options.budget) {
        throw BudgetError("exact solver: C(" + std::to_string(n) + ", " + std::to_string(k) + ") subsets exceed budget " +
                          std::to_string(options.budget));
    }
    if (k == 0) return make_cut(graph, {}, objective);

    const std::size_t tasks = n - k + 1;
    std::vector<ExactBest> partial(tasks);
    parallel_for(tasks, options.threads, [&](std::size_t first) {
        partial[first] = enumerate_with_first(graph, k, static_cast<NodeIndex>(first), objective);
    });

    // Tasks are in lexicographic order of their first element, so keeping
    // the earliest strict maximum preserves the tie rule.
    const ExactBest* best = &partial[0];
    for (const auto& candidate : partial) {
        if (candidate.found && candidate.value > best->value) best = &candidate;
    }
    return make_cut(graph, best->members, objective);
}

std::vector<CurvePoint> prefix_curve(const LnGraph& graph, std::span<const NodeIndex> order)
{
    std::vector<char> in(graph.node_count(), 0);
    std::vector<CurvePoint> curve;
    curve.reserve(order.size());
    CurvePoint point;
    for (NodeIndex u : order) {
        if (u >= graph.node_count()) throw DataError("node index " + std::to_string(u) + " outside the graph");
        if (in[u]) throw UsageError("node " + graph.label(u) + " repeated in sequence");
        for (ChannelIndex ci : graph.incident(u)) {
            const auto& c = graph.channel(ci);
            const int sign = in[c.other(u)] ? -1 : 1;
            point.edge_count += sign;
            point.cut_capacity += sign * c.capacity;
        }
        in[u] = 1;
        ++point.k;
        curve.push_back(point);
    }
    return curve;
}

std::vector<CurvePoint> value_vs_k_curve(const LnGraph& graph, std::size_t k_max, Objective objective)
{
    if (k_max == 0) return {};
    const auto [cut, trace] = greedy_lopsided_cut(graph, k_max, objective);
    return prefix_curve(graph, cut.coalition);
}

CutRecord to_record(const LnGraph& graph, const Cut& cut)
{
    CutRecord record;
    record.k = cut.k();
    record.objective = cut.objective;
    for (NodeIndex v : cut.coalition) record.coalition.push_back(graph.label(v));
    for (ChannelIndex ci : cut.cut_channels) {
        const auto& c = graph.channel(ci);
        record.cut_channels.push_back({c.id, graph.label(c.node_a), graph.label(c.node_b), c.capacity});
    }
    record.edge_count = cut.edge_count;
    record.cut_capacity_sat = cut.cut_capacity;
    return record;
}

std::string write_cut_json(const CutRecord& record)
{
    nlohmann::ordered_json doc;
    doc["k"] = record.k;
    doc["objective"] = std::string(to_string(record.objective));
    doc["coalition"] = record.coalition;
    auto channels = nlohmann::ordered_json::array();
    for (const auto& c : record.cut_channels) {
        channels.push_back({{"id", c.id}, {"node_a", c.node_a}, {"node_b", c.node_b}, {"capacity_sat", c.capacity}});
    }
    doc["cut_channels"] = std::move(channels);
    doc["edge_count"] = record.edge_count;
    doc["cut_capacity_sat"] = record.cut_capacity_sat;
    return doc.dump(2) + "\n";
}

CutRecord parse_cut_json(std::string_view document)
{
    CutRecord record;
    try {
        const auto doc = nlohmann::json::parse(document);
        record.k = doc.at("k").get<std::size_t>();
        record.objective = parse_objective(doc.at("objective").get<std::string>());
        record.coalition = doc.at("coalition").get<std::vector<std::string>>();
        for (const auto& c : doc.at("cut_channels")) {
            record.cut_channels.push_back({c.at("id").get<std::string>(), c.at("node_a").get<std::string>(),
                                           c.at("node_b").get<std::string>(), c.at("capacity_sat").get<Satoshis>()});
        }
        record.edge_count = doc.at("edge_count").get<std::int64_t>();
        record.cut_capacity_sat = doc.at("cut_capacity_sat").get<Satoshis>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed cut JSON: ") + e.what());
    }

    if (record.coalition.size() != record.k) throw DataError("cut JSON: coalition size differs from k");
    if (static_cast<std::size_t>(record.edge_count) != record.cut_channels.size()) {
        throw DataError("cut JSON: edge_count differs from the number of cut_channels");
    }
    Satoshis total = 0;
    for (const auto& c : record.cut_channels) {
        if (c.capacity < 0) throw DataError("cut JSON: negative capacity on channel " + c.id);
        total += c.capacity;
    }
    if (total != record.cut_capacity_sat) throw DataError("cut JSON: cut_capacity_sat differs from the channel sum");
    return record;
}

std::string write_curve_csv(std::span<const CurvePoint> curve)
{
    std::string out = "k,edge_count,cut_capacity_sat\n";
    for (const auto& p : curve) {
        out += std::to_string(p.k) + ',' + std::to_string(p.edge_count) + ',' + std::to_string(p.cut_capacity) + '\n';
    }
    return out;
}

} // namespace lnme
