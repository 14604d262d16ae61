// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/error.h>
#include <lnme/mempool.h>
#include <lnme/replay.h>

#include "oracles.h"

#include <doctest.h>

#include <random>
#include <set>

using namespace lnme;

namespace {

const FeeRate TOP = FeeRate::from_sat_per_vb(5000);

MempoolTimeline empty_timeline(std::size_t snapshots = 100)
{
    return constant_timeline(default_band_edges(), std::vector<std::int64_t>(36, 0), 0, snapshots);
}

std::vector<TxId> flatten(const std::vector<ConfirmedBatch>& batches)
{
    std::vector<TxId> out;
    for (const auto& b : batches) {
        for (std::uint64_t i = 0; i < b.count; ++i) out.push_back(b.first + i);
    }
    return out;
}

std::vector<FeeRate> small_edges(std::size_t bands)
{
    std::vector<FeeRate> e;
    for (std::size_t b = 0; b < bands; ++b) e.push_back(FeeRate::from_sat_per_vb(static_cast<std::int64_t>(10 * b)));
    return e;
}

MempoolTimeline random_timeline(std::mt19937_64& rng, std::size_t bands, std::size_t snapshots)
{
    std::vector<Timestamp> ts;
    std::vector<std::int64_t> counts;
    for (std::size_t i = 0; i < snapshots; ++i) {
        ts.push_back(static_cast<Timestamp>(60 * i));
        for (std::size_t b = 0; b < bands; ++b) counts.push_back(static_cast<std::int64_t>(rng() % 30));
    }
    return MempoolTimeline(small_edges(bands), ts, counts);
}

} // namespace

TEST_SUITE("replay")
{
TEST_CASE("single transaction with free capacity confirms")
{
    const auto t = empty_timeline();
    ReplayEngine engine(t);
    engine.submit(1, TOP, 0);
    const auto batches = engine.process_block({10, 60, 1}, BlockCapacityMode::historical());
    CHECK(flatten(batches) == std::vector<TxId>{1});
    CHECK(engine.tx(1).status == TxStatus::Confirmed);
    CHECK(engine.tx(1).confirmed_height == 10);
    CHECK(engine.pending_count() == 0);
}

TEST_CASE("capacity splits a top-band batch")
{
    const auto t = empty_timeline();
    ReplayEngine engine(t);
    engine.submit_batch(0, 10, TOP, 0);
    CHECK(flatten(engine.process_block({1, 60, 3}, BlockCapacityMode::historical())) == std::vector<TxId>{0, 1, 2});
    CHECK(engine.pending_count() == 7);
    CHECK(engine.tx(3).status == TxStatus::Pending);
    CHECK(engine.tx(2).confirmed_height == 1);
}

TEST_CASE("higher-priority backlog blocks confirmation")
{
    std::vector<std::int64_t> counts(36, 0);
    counts[35] = 2100;
    const auto t = constant_timeline(default_band_edges(), counts, 0, 10);
    ReplayEngine engine(t);
    engine.submit(1, FeeRate::from_sat_per_vb(50), 0);
    CHECK(engine.process_block({1, 60, 2000}, BlockCapacityMode::historical()).empty());
    CHECK(engine.tx(1).status == TxStatus::Pending);
}

TEST_CASE("queue position at submission")
{
    const auto e = small_edges(3);
    const auto t = MempoolTimeline(e, {0, 60}, {0, 12, 0, 0, 12, 0});
    ReplayEngine engine(t);
    CHECK(engine.submit(1, FeeRate::from_sat_per_vb(25), 0).same_band_ahead == 0);
    CHECK(engine.submit(2, FeeRate::from_sat_per_vb(15), 0).same_band_ahead == 12);
}

TEST_CASE("queue position decays with band outflow")
{
    const auto e = small_edges(2);
    const auto t = MempoolTimeline(e, {0, 60, 120, 180}, {50, 0, 30, 0, 50, 0, 45, 0});
    ReplayEngine engine(t);
    engine.submit(1, FeeRate::from_sat_per_vb(1), 0);
    engine.process_block({1, 60, 0}, BlockCapacityMode::historical());
    CHECK(engine.tx(1).same_band_ahead == 30); // 50 -> 30 drains 20
    engine.process_block({2, 120, 0}, BlockCapacityMode::historical());
    CHECK(engine.tx(1).same_band_ahead == 30); // arrivals queue behind
    engine.process_block({3, 180, 0}, BlockCapacityMode::historical());
    CHECK(engine.tx(1).same_band_ahead == 25);
}

TEST_CASE("bumps")
{
    const auto e = small_edges(3);
    const auto t = MempoolTimeline(e, {0, 60}, {5, 7, 0, 5, 7, 0});
    ReplayEngine engine(t);
    engine.submit(1, FeeRate::from_sat_per_vb(1), 0);
    CHECK(engine.tx(1).same_band_ahead == 5);
    const auto into_empty = engine.bump(1, FeeRate::from_sat_per_vb(25), 30);
    CHECK(into_empty.same_band_ahead == 0);
    CHECK(into_empty.queued_at == 30);
    CHECK(into_empty.submitted_at == 0);

    engine.submit(2, FeeRate::from_sat_per_vb(11), 30);
    const auto within = engine.bump(2, FeeRate::from_sat_per_vb(12), 60);
    CHECK(within.same_band_ahead == 7);

    CHECK_THROWS_AS(engine.bump(2, FeeRate::from_sat_per_vb(12), 60), UsageError);
    CHECK_THROWS_AS(engine.bump(2, FeeRate::from_sat_per_vb(3), 60), UsageError);
    engine.process_block({1, 60, 1}, BlockCapacityMode::historical());
    CHECK(engine.tx(1).status == TxStatus::Confirmed);
    CHECK_THROWS_AS(engine.bump(1, FeeRate::from_sat_per_vb(30), 60), UsageError);
    CHECK_THROWS_AS(engine.withdraw(1), UsageError);
}

TEST_CASE("engine argument errors")
{
    const auto t = empty_timeline(10);
    ReplayEngine engine(t);
    engine.submit_batch(5, 5, TOP, 0);
    CHECK_THROWS_AS(engine.submit(7, TOP, 0), UsageError);
    CHECK_THROWS_AS(engine.submit_batch(0, 6, TOP, 0), UsageError);
    CHECK_THROWS_AS(engine.submit_batch(20, 0, TOP, 0), UsageError);
    CHECK_THROWS_AS(engine.tx(99), UsageError);
    CHECK_THROWS_AS(engine.set_conflict(5, 5), UsageError);
    engine.process_block({3, 120, 0}, BlockCapacityMode::historical());
    CHECK_THROWS_AS(engine.process_block({3, 180, 0}, BlockCapacityMode::historical()), UsageError);
    CHECK_THROWS_AS(engine.submit(50, TOP, 60), UsageError);
    CHECK_THROWS_AS(engine.submit(50, TOP, 100000), DataError);
    CHECK_THROWS_AS(BlockCapacityMode::constant(0), UsageError);
    CHECK(BlockCapacityMode::constant(7).capacity({1, 1, 999}) == 7);
}

TEST_CASE("empty-mempool limit")
{
    const auto t = empty_timeline(10000);
    for (std::uint64_t n : {1ULL, 1999ULL, 2000ULL, 2001ULL, 10911ULL}) {
        ReplayEngine engine(t);
        engine.submit_batch(0, n, TOP, 0);
        std::size_t blocks = 0;
        while (engine.pending_count() > 0) {
            ++blocks;
            engine.process_block({static_cast<BlockHeight>(blocks), static_cast<Timestamp>(600 * blocks), 2000},
                                 BlockCapacityMode::historical());
        }
        CHECK(blocks == (n + 1999) / 2000);
    }
}

TEST_CASE("conflicting pair: the first to confirm withdraws the other")
{
    const auto e = small_edges(3);
    const auto t = MempoolTimeline(e, {0, 60, 120}, std::vector<std::int64_t>(9, 0));
    SUBCASE("higher fee wins in a shared block")
    {
        ReplayEngine engine(t);
        engine.submit(1, FeeRate::from_sat_per_vb(5), 0);
        engine.submit(2, FeeRate::from_sat_per_vb(25), 0);
        engine.set_conflict(1, 2);
        CHECK(flatten(engine.process_block({1, 60, 5}, BlockCapacityMode::historical())) == std::vector<TxId>{2});
        CHECK(engine.tx(1).status == TxStatus::Withdrawn);
        CHECK(engine.pending_count() == 0);
    }
    SUBCASE("withdrawn side does not use capacity")
    {
        ReplayEngine engine(t);
        engine.submit_batch(10, 3, FeeRate::from_sat_per_vb(25), 0);
        engine.submit(20, FeeRate::from_sat_per_vb(25), 0);
        engine.submit(21, FeeRate::from_sat_per_vb(5), 0);
        engine.set_conflict(11, 21);
        CHECK(flatten(engine.process_block({1, 60, 4}, BlockCapacityMode::historical())) == std::vector<TxId>{10, 11, 12, 20});
        CHECK(engine.tx(21).status == TxStatus::Withdrawn);
    }
}

TEST_CASE("event log line")
{
    const std::vector<ConfirmedBatch> batches{{3, 2}, {9, 1}};
    CHECK(event_log_line(12, batches) == R"({"height":12,"confirmed":[3,4,9]})");
    CHECK(event_log_line(1, {}) == R"({"height":1,"confirmed":[]})");
}

TEST_CASE("differential test against the per-transaction reference")
{
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t bands = 2 + rng() % 5;
        const auto timeline = random_timeline(rng, bands, 60);
        ReplayEngine engine(timeline);
        oracle::NaiveReplay naive(timeline);
        const auto random_fee = [&] { return FeeRate::from_centi(static_cast<std::int64_t>(rng() % (bands * 1000 + 500))); };

        TxId next_id = 0;
        std::vector<TxId> ids;
        Timestamp now = 0;
        BlockHeight height = 100;
        const bool constant = trial % 3 == 0;
        const auto mode = constant ? BlockCapacityMode::constant(25) : BlockCapacityMode::historical();
        while (now < 60 * 59) {
            const int ops = static_cast<int>(rng() % 4);
            for (int op = 0; op < ops; ++op) {
                now = std::min<Timestamp>(now + static_cast<Timestamp>(rng() % 40), 60 * 59);
                switch (rng() % 4) {
                case 0: { // batch
                    const std::uint64_t n = 1 + rng() % 6;
                    const auto fee = random_fee();
                    engine.submit_batch(next_id, n, fee, now);
                    for (std::uint64_t i = 0; i < n; ++i) {
                        naive.submit(next_id + i, fee.centi(), now);
                        ids.push_back(next_id + i);
                    }
                    next_id += n;
                    break;
                }
                case 1: {
                    const auto fee = random_fee();
                    engine.submit(next_id, fee, now);
                    naive.submit(next_id, fee.centi(), now);
                    ids.push_back(next_id++);
                    break;
                }
                case 2: { // bump a pending one
                    if (ids.empty()) break;
                    const TxId id = ids[rng() % ids.size()];
                    if (naive.tx(id).status != 0) break;
                    const auto fee = FeeRate::from_centi(naive.tx(id).fee_centi + 1 + static_cast<std::int64_t>(rng() % 1500));
                    const auto bumped = engine.bump(id, fee, now);
                    naive.bump(id, fee.centi(), now);
                    CHECK(bumped.same_band_ahead == naive.tx(id).ahead);
                    break;
                }
                default: {
                    if (ids.empty()) break;
                    const TxId id = ids[rng() % ids.size()];
                    if (naive.tx(id).status != 0) break;
                    engine.withdraw(id);
                    naive.withdraw(id);
                    break;
                }
                }
            }
            now = std::min<Timestamp>(now + static_cast<Timestamp>(rng() % 300), 60 * 59);
            const BlockEntry block{++height, now, static_cast<std::int64_t>(rng() % 50)};
            const auto fast = flatten(engine.process_block(block, mode));
            auto slow = naive.block(block.height, block.timestamp, mode.capacity(block));
            const std::set<TxId> fast_set(fast.begin(), fast.end());
            const std::set<TxId> slow_set(slow.begin(), slow.end());
            INFO("trial " << trial << " height " << height);
            REQUIRE(fast_set == slow_set);
            CHECK(fast.size() == fast_set.size());
        }
        std::uint64_t pending = 0;
        for (const auto& [id, tx] : naive.all()) {
            const auto mirror = engine.tx(id);
            CHECK(static_cast<int>(mirror.status) == tx.status);
            CHECK(mirror.fee.centi() == tx.fee_centi);
            CHECK(mirror.queued_at == tx.queued_at);
            if (tx.status == 0) {
                ++pending;
                CHECK(mirror.same_band_ahead == tx.ahead);
                CHECK(mirror.same_band_ahead >= 0);
            }
            if (tx.status == 1) CHECK(mirror.confirmed_height == tx.height);
        }
        CHECK(engine.pending_count() == pending);
    }
}

TEST_CASE("batch submission behaves like individual submissions")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const auto timeline = random_timeline(rng, 4, 40);
        ReplayEngine batch(timeline), single(timeline);
        const auto fee = FeeRate::from_centi(static_cast<std::int64_t>(rng() % 4000));
        const std::uint64_t n = 1 + rng() % 200;
        batch.submit_batch(0, n, fee, 0);
        for (TxId id = 0; id < n; ++id) single.submit(id, fee, 0);
        for (BlockHeight h = 1; h < 39; ++h) {
            const BlockEntry block{h, 60 * h, static_cast<std::int64_t>(rng() % 60)};
            CHECK(flatten(batch.process_block(block, BlockCapacityMode::historical())) ==
                  flatten(single.process_block(block, BlockCapacityMode::historical())));
            if (h % 5 == 0) {
                const auto bump = [](FeeRate f) { return f.scaled(1.3); };
                const auto bumped = batch.bump_range(0, n, bump, 60 * h);
                std::uint64_t bumped_single = 0;
                for (TxId id = 0; id < n; ++id) {
                    const auto tx = single.tx(id);
                    if (tx.status == TxStatus::Pending && tx.fee < bump(tx.fee)) {
                        single.bump(id, bump(tx.fee), 60 * h);
                        ++bumped_single;
                    }
                }
                CHECK(bumped == bumped_single);
            }
        }
        CHECK(batch.pending_count() == single.pending_count());
    }
}

TEST_CASE("a million saturated transactions never confirm")
{
    std::vector<std::int64_t> counts(36, 0);
    counts[35] = 1'000'000;
    const auto t = constant_timeline(default_band_edges(), counts, 0, 600 * 500 / 60 + 1);
    ReplayEngine engine(t);
    engine.submit_batch(0, 1'000'000, FeeRate::from_sat_per_vb(10), 0);
    for (BlockHeight h = 1; h <= 500; ++h) {
        CHECK(engine.process_block({h, 600 * h, 2000}, BlockCapacityMode::historical()).empty());
    }
    CHECK(engine.pending_count() == 1'000'000);
}
}
