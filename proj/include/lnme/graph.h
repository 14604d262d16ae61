// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef LNME_GRAPH_H
#define LNME_GRAPH_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace lnme {

/// Amounts are integer satoshis everywhere; BTC only appears in report output.
using Satoshis = std::int64_t;
inline constexpr Satoshis SATS_PER_BTC = 100'000'000;

/// Dense node index in 0..n-1, assigned in order of first appearance.
using NodeIndex = std::uint32_t;
/// Position of a channel in LnGraph::channels().
using ChannelIndex = std::uint32_t;

struct Channel {
    std::string id;
    NodeIndex node_a{0};
    NodeIndex node_b{0};
    Satoshis capacity{0};

    NodeIndex other(NodeIndex endpoint) const { return endpoint == node_a ? node_b : node_a; }
};

/**
 * Capacity-weighted multigraph of payment channels. Parallel channels are
 * kept distinct. Immutable once built; see GraphBuilder.
 */
class LnGraph {
public:
    LnGraph() = default;

    std::size_t node_count() const { return labels_.size(); }
    std::size_t channel_count() const { return channels_.size(); }

    const std::string& label(NodeIndex node) const { return labels_.at(node); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Channel>& channels() const { return channels_; }
    const Channel& channel(ChannelIndex index) const { return channels_.at(index); }

    /// Channels incident to `node`.
    std::span<const ChannelIndex> incident(NodeIndex node) const { return adjacency_.at(node); }
    std::size_t degree(NodeIndex node) const { return adjacency_.at(node).size(); }

    /// Throws DataError if the label is unknown.
    NodeIndex index_of(std::string_view label) const;
    bool contains(std::string_view label) const;

    Satoshis total_capacity() const;

private:
    friend class GraphBuilder;

    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<Channel> channels_;
    std::vector<std::vector<ChannelIndex>> adjacency_;
};

class GraphBuilder {
public:
    /// Returns the existing index when the label is already known.
    NodeIndex add_node(std::string_view label);

    /// Both endpoints must have been added. Rejects self-loops and negative capacity.
    ChannelIndex add_channel(std::string id, NodeIndex a, NodeIndex b, Satoshis capacity);

    std::size_t node_count() const { return graph_.node_count(); }

    LnGraph build() &&;

private:
    LnGraph graph_;
};

/// Subset of lnd `describegraph` output: `nodes[].pub_key` and
/// `edges[].{channel_id,node1_pub,node2_pub,capacity}`. Unknown fields are ignored.
LnGraph parse_lnd_graph(std::string_view document);

/// Rows `node_a,node_b,capacity_sat` with an optional header of the same
/// names. Channel ids are generated from the 1-based data row number.
LnGraph parse_edge_list(std::string_view document);

/// Inverse of parse_edge_list (header included, LF line endings).
std::string write_edge_list(const LnGraph& graph);

struct ConstantCapacity {
    Satoshis value{4'500'000};
};

/// Uniform over the closed range [min, max].
struct UniformCapacity {
    Satoshis min{0};
    Satoshis max{0};
};

using CapacitySampler = std::variant<ConstantCapacity, UniformCapacity>;

/**
 * Preferential-attachment (Barabasi-Albert) graph. Starts from a clique on
 * nodes 0..m; every further node attaches m channels to distinct existing
 * nodes chosen with probability proportional to their current degree.
 * Node labels are the decimal indices. Requires n > m >= 1.
 */
LnGraph generate_scale_free(std::size_t n, std::size_t m, std::uint64_t seed,
                            const CapacitySampler& capacity = ConstantCapacity{});

/// Maps degree to the number of nodes with that degree.
std::map<std::size_t, std::size_t> degree_histogram(const LnGraph& graph);

} // namespace lnme

#endif // LNME_GRAPH_H
