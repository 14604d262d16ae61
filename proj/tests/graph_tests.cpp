// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/error.h>
#include <lnme/graph.h>

#include "oracles.h"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <tuple>

using namespace lnme;

namespace {

const char* const MINIMAL_LND = R"({
  "nodes": [{"pub_key": "A", "alias": "alice"}, {"pub_key": "B"}],
  "edges": [{"channel_id": "770000000000000001", "node1_pub": "A", "node2_pub": "B",
             "capacity": "4500000", "node1_policy": null}]
})";

void check_histogram_identities(const LnGraph& g)
{
    const auto hist = degree_histogram(g);
    std::size_t nodes = 0, endpoints = 0;
    for (const auto& [degree, count] : hist) {
        nodes += count;
        endpoints += degree * count;
    }
    CHECK(nodes == g.node_count());
    CHECK(endpoints == 2 * g.channel_count());
}

using ChannelKey = std::tuple<std::string, std::string, Satoshis>;

std::vector<ChannelKey> channel_multiset(const LnGraph& g)
{
    std::vector<ChannelKey> keys;
    for (const auto& c : g.channels()) {
        auto a = g.label(c.node_a), b = g.label(c.node_b);
        if (b < a) std::swap(a, b);
        keys.emplace_back(a, b, c.capacity);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

} // namespace

TEST_SUITE("graph")
{
TEST_CASE("lnd document with one channel")
{
    const auto g = parse_lnd_graph(MINIMAL_LND);
    CHECK(g.node_count() == 2);
    REQUIRE(g.channel_count() == 1);
    CHECK(g.channel(0).capacity == 4'500'000);
    CHECK(g.channel(0).id == "770000000000000001");
    CHECK(g.label(g.channel(0).node_a) == "A");
    check_histogram_identities(g);
}

TEST_CASE("lnd ingestion keeps isolated nodes and numeric fields")
{
    const auto g = parse_lnd_graph(R"({"nodes":[{"pub_key":"A"},{"pub_key":"B"},{"pub_key":"C"}],
        "edges":[{"channel_id":12,"node1_pub":"A","node2_pub":"B","capacity":100}]})");
    CHECK(g.node_count() == 3);
    CHECK(g.degree(g.index_of("C")) == 0);
    CHECK(g.channel(0).id == "12");
}

TEST_CASE("lnd ingestion errors")
{
    CHECK_THROWS_AS(parse_lnd_graph("{not json"), DataError);
    CHECK_THROWS_AS(parse_lnd_graph(R"({"nodes":[]})"), DataError);
    CHECK_THROWS_AS(parse_lnd_graph(R"({"nodes":[{"pub_key":"A"}],
        "edges":[{"channel_id":"1","node1_pub":"A","node2_pub":"A","capacity":"5"}]})"),
                    DataError);
    CHECK_THROWS_WITH_AS(parse_lnd_graph(R"({"nodes":[{"pub_key":"A"}],
        "edges":[{"channel_id":"chan-77","node1_pub":"A","node2_pub":"Z","capacity":"5"}]})"),
                         doctest::Contains("chan-77"), DataError);
    CHECK_THROWS_AS(parse_lnd_graph(R"({"nodes":[{"pub_key":"A"},{"pub_key":"B"}],
        "edges":[{"channel_id":"1","node1_pub":"A","node2_pub":"B","capacity":"-5"}]})"),
                    DataError);
    CHECK_THROWS_AS(parse_lnd_graph(R"({"nodes":[{"pub_key":"A"},{"pub_key":"B"}],
        "edges":[{"channel_id":"1","node1_pub":"A","node2_pub":"B","capacity":"12abc"}]})"),
                    DataError);
}

TEST_CASE("edge list parsing")
{
    const auto g = parse_edge_list("a,b,100\nb,c,200");
    CHECK(g.node_count() == 3);
    CHECK(g.channel_count() == 2);
    CHECK(g.total_capacity() == 300);

    const auto with_header = parse_edge_list("node_a,node_b,capacity_sat\na,b,100\na,b,100\n");
    CHECK(with_header.channel_count() == 2); // parallel channels survive
    CHECK(with_header.channel(0).id != with_header.channel(1).id);

    const auto empty = parse_edge_list("");
    CHECK(empty.node_count() == 0);
    CHECK(empty.channel_count() == 0);
    CHECK(degree_histogram(empty).empty());
}

TEST_CASE("edge list errors")
{
    CHECK_THROWS_AS(parse_edge_list("a,a,100"), DataError);
    CHECK_THROWS_AS(parse_edge_list("a,b,1.5"), DataError);
    CHECK_THROWS_AS(parse_edge_list("a,b"), DataError);
    CHECK_THROWS_AS(parse_edge_list("a,b,1,2"), DataError);
    CHECK_THROWS_AS(parse_edge_list("a,b,-1"), DataError);
}

TEST_CASE("degree histogram examples")
{
    using Hist = std::map<std::size_t, std::size_t>;
    CHECK(degree_histogram(parse_edge_list("a,b,1\nb,c,1")) == Hist{{1, 2}, {2, 1}});
    CHECK(degree_histogram(parse_edge_list("h,a,1\nh,b,1\nh,c,1\nh,d,1")) == Hist{{1, 4}, {4, 1}});
}

TEST_CASE("edge list round trip preserves labels and channel multiset")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + rng() % 15);
        const auto g = oracle::build_graph(n, oracle::random_edges(n, 0.3, rng, false));
        const auto again = parse_edge_list(write_edge_list(g));
        CHECK(channel_multiset(again) == channel_multiset(g));
        // Isolated nodes have no row in an edge list; every other label survives.
        for (NodeIndex v = 0; v < g.node_count(); ++v) {
            if (g.degree(v) > 0) CHECK(again.contains(g.label(v)));
        }
        check_histogram_identities(g);
        check_histogram_identities(again);
    }
}

TEST_CASE("scale-free generator: small tree")
{
    const auto g = generate_scale_free(5, 1, 7);
    CHECK(g.node_count() == 5);
    CHECK(g.channel_count() == 4);
    // Connected with n - 1 edges: a tree. Union-find over the channels.
    std::vector<NodeIndex> parent(5);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](NodeIndex v) {
        while (parent[v] != v) v = parent[v];
        return v;
    };
    for (const auto& c : g.channels()) parent[find(c.node_a)] = find(c.node_b);
    for (NodeIndex v = 1; v < 5; ++v) CHECK(find(v) == find(0));
    for (const auto& c : g.channels()) CHECK(c.capacity == 4'500'000);
}

TEST_CASE("scale-free generator: edge count matches construction")
{
    // Clique on m + 1 nodes, then m channels for each later node.
    const auto expected = [](std::size_t n, std::size_t m) { return m * (m + 1) / 2 + m * (n - m - 1); };
    CHECK(expected(1000, 3) == 2994);
    CHECK(generate_scale_free(1000, 3, 1).channel_count() == 2994);
    CHECK(generate_scale_free(200, 5, 9).channel_count() == expected(200, 5));
    CHECK(generate_scale_free(2, 1, 0).channel_count() == 1);
}

TEST_CASE("scale-free generator: determinism and errors")
{
    const auto a = generate_scale_free(300, 2, 42, UniformCapacity{1000, 5000});
    const auto b = generate_scale_free(300, 2, 42, UniformCapacity{1000, 5000});
    CHECK(write_edge_list(a) == write_edge_list(b));
    CHECK(write_edge_list(a) != write_edge_list(generate_scale_free(300, 2, 43, UniformCapacity{1000, 5000})));
    for (const auto& c : a.channels()) {
        CHECK(c.capacity >= 1000);
        CHECK(c.capacity <= 5000);
    }
    CHECK_THROWS_AS(generate_scale_free(3, 3, 1), UsageError);
    CHECK_THROWS_AS(generate_scale_free(10, 0, 1), UsageError);
}

TEST_CASE("scale-free generator: heavy-tailed degrees")
{
    for (auto [n, m] : {std::pair<std::size_t, std::size_t>{200, 2}, {1000, 3}, {2000, 4}}) {
        double ratio_sum = 0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto g = generate_scale_free(n, m, seed);
            std::vector<std::size_t> degrees;
            for (NodeIndex v = 0; v < g.node_count(); ++v) degrees.push_back(g.degree(v));
            std::sort(degrees.begin(), degrees.end());
            ratio_sum += static_cast<double>(degrees.back()) / static_cast<double>(degrees[degrees.size() / 2]);
            check_histogram_identities(g);
        }
        INFO("n=" << n << " m=" << m);
        CHECK(ratio_sum / 10 > 5.0);
    }
}
}
