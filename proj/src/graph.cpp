// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/graph.h>

#include <lnme/error.h>

#include "text.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <random>

namespace lnme {

NodeIndex LnGraph::index_of(std::string_view label) const
{
    auto it = index_.find(std::string(label));
    if (it == index_.end()) throw DataError("unknown node '" + std::string(label) + "'");
    return it->second;
}

bool LnGraph::contains(std::string_view label) const
{
    return index_.count(std::string(label)) > 0;
}

Satoshis LnGraph::total_capacity() const
{
    return std::accumulate(channels_.begin(), channels_.end(), Satoshis{0},
                           [](Satoshis sum, const Channel& c) { return sum + c.capacity; });
}

NodeIndex GraphBuilder::add_node(std::string_view label)
{
    auto [it, inserted] = graph_.index_.try_emplace(std::string(label), static_cast<NodeIndex>(graph_.labels_.size()));
    if (inserted) {
        graph_.labels_.emplace_back(label);
        graph_.adjacency_.emplace_back();
    }
    return it->second;
}

ChannelIndex GraphBuilder::add_channel(std::string id, NodeIndex a, NodeIndex b, Satoshis capacity)
{
    const auto n = graph_.node_count();
    if (a >= n || b >= n) throw DataError("channel " + id + " references an unknown node");
    if (a == b) throw DataError("channel " + id + " is a self-loop on " + graph_.labels_[a]);
    if (capacity < 0) throw DataError("channel " + id + " has negative capacity");

    const auto index = static_cast<ChannelIndex>(graph_.channels_.size());
    graph_.channels_.push_back(Channel{std::move(id), a, b, capacity});
    graph_.adjacency_[a].push_back(index);
    graph_.adjacency_[b].push_back(index);
    return index;
}

LnGraph GraphBuilder::build() &&
{
    return std::move(graph_);
}

namespace {

std::string json_scalar_text(const nlohmann::json& value)
{
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

Satoshis parse_capacity(const nlohmann::json& value, const std::string& channel_id)
{
    std::optional<std::int64_t> sats;
    if (value.is_string()) {
        sats = text::parse_int(value.get<std::string>());
    } else if (value.is_number_integer()) {
        sats = value.get<std::int64_t>();
    }
    if (!sats) throw DataError("channel " + channel_id + ": non-numeric capacity " + value.dump());
    if (*sats < 0) throw DataError("channel " + channel_id + ": negative capacity " + value.dump());
    return *sats;
}

} // namespace

LnGraph parse_lnd_graph(std::string_view document)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("malformed graph JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges") ||
        !doc["nodes"].is_array() || !doc["edges"].is_array()) {
        throw DataError("graph JSON needs top-level arrays 'nodes' and 'edges'");
    }

    GraphBuilder builder;
    std::unordered_map<std::string, NodeIndex> known;
    for (const auto& node : doc["nodes"]) {
        if (!node.is_object() || !node.contains("pub_key") || !node["pub_key"].is_string()) {
            throw DataError("graph JSON node without string pub_key");
        }
        const auto key = node["pub_key"].get<std::string>();
        known.emplace(key, builder.add_node(key));
    }

    for (const auto& edge : doc["edges"]) {
        if (!edge.is_object()) throw DataError("graph JSON edge is not an object");
        const std::string id = edge.contains("channel_id") ? json_scalar_text(edge["channel_id"]) : std::string("?");
        for (const char* field : {"node1_pub", "node2_pub", "capacity"}) {
            if (!edge.contains(field)) throw DataError("channel " + id + " lacks field " + field);
        }
        const auto lookup = [&](const char* field) {
            const auto key = json_scalar_text(edge[field]);
            auto it = known.find(key);
            if (it == known.end()) throw DataError("channel " + id + " references unknown node " + key);
            return it->second;
        };
        const NodeIndex a = lookup("node1_pub");
        const NodeIndex b = lookup("node2_pub");
        builder.add_channel(id, a, b, parse_capacity(edge["capacity"], id));
    }
    return std::move(builder).build();
}

LnGraph parse_edge_list(std::string_view document)
{
    GraphBuilder builder;
    std::size_t row = 0;
    bool first = true;
    for (auto line : text::split_lines(document)) {
        if (text::is_blank(line)) continue;
        const auto fields = text::split_fields(line);
        if (first) {
            first = false;
            if (fields.size() == 3 && fields[0] == "node_a" && fields[1] == "node_b" && fields[2] == "capacity_sat") continue;
        }
        ++row;
        if (fields.size() != 3) {
            throw DataError("edge list row " + std::to_string(row) + ": expected 3 fields, got " + std::to_string(fields.size()));
        }
        const auto capacity = text::parse_int(fields[2]);
        if (!capacity) throw DataError("edge list row " + std::to_string(row) + ": non-integer capacity '" + std::string(fields[2]) + "'");
        const NodeIndex a = builder.add_node(fields[0]);
        const NodeIndex b = builder.add_node(fields[1]);
        builder.add_channel(std::to_string(row), a, b, *capacity);
    }
    return std::move(builder).build();
}

std::string write_edge_list(const LnGraph& graph)
{
    std::string out = "node_a,node_b,capacity_sat\n";
    for (const auto& c : graph.channels()) {
        out += graph.label(c.node_a);
        out += ',';
        out += graph.label(c.node_b);
        out += ',';
        out += std::to_string(c.capacity);
        out += '\n';
    }
    return out;
}

LnGraph generate_scale_free(std::size_t n, std::size_t m, std::uint64_t seed, const CapacitySampler& capacity)
{
    if (m < 1 || n <= m) throw UsageError("scale-free generator needs n > m >= 1");

    std::mt19937_64 rng(seed);
    auto draw_capacity = [&]() -> Satoshis {
        return std::visit(
            [&](const auto& sampler) -> Satoshis {
                using T = std::decay_t<decltype(sampler)>;
                if constexpr (std::is_same_v<T, ConstantCapacity>) {
                    return sampler.value;
                } else {
                    if (sampler.min < 0 || sampler.max < sampler.min) throw UsageError("invalid uniform capacity range");
                    return std::uniform_int_distribution<Satoshis>(sampler.min, sampler.max)(rng);
                }
            },
            capacity);
    };

    GraphBuilder builder;
    for (std::size_t v = 0; v < n; ++v) builder.add_node(std::to_string(v));

    // Each node appears once per incident channel, so a uniform draw from
    // this pool is a degree-proportional draw.
    std::vector<NodeIndex> pool;
    pool.reserve(2 * (m * (m + 1) / 2 + m * (n - m - 1)));
    std::size_t next_id = 0;
    auto connect = [&](NodeIndex a, NodeIndex b) {
        builder.add_channel(std::to_string(next_id++), a, b, draw_capacity());
        pool.push_back(a);
        pool.push_back(b);
    };

    for (NodeIndex a = 0; a <= m; ++a) {
        for (NodeIndex b = a + 1; b <= m; ++b) connect(a, b);
    }

    std::vector<NodeIndex> targets;
    for (std::size_t v = m + 1; v < n; ++v) {
        targets.clear();
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        while (targets.size() < m) {
            const NodeIndex candidate = pool[pick(rng)];
            if (std::find(targets.begin(), targets.end(), candidate) == targets.end()) targets.push_back(candidate);
        }
        for (NodeIndex target : targets) connect(static_cast<NodeIndex>(v), target);
    }
    return std::move(builder).build();
}

std::map<std::size_t, std::size_t> degree_histogram(const LnGraph& graph)
{
    std::map<std::size_t, std::size_t> histogram;
    for (NodeIndex v = 0; v < graph.node_count(); ++v) ++histogram[graph.degree(v)];
    return histogram;
}

} // namespace lnme
