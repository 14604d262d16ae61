// Copyright (c) 2026 The lnme developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <lnme/cli.h>

#include <doctest.h>
#include <nlohmann/json.hpp>
#include <openssl/sha.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using lnme::cli::EXIT_DATA;
using lnme::cli::EXIT_EXHAUSTED;
using lnme::cli::EXIT_OK;
using lnme::cli::EXIT_USAGE;

namespace {

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::string pattern = (fs::temp_directory_path() / "lnme-cli-XXXXXX").string();
        path = mkdtemp(pattern.data());
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result lnme_run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = lnme::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string sha256(const std::string& data)
{
    unsigned char d[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), d);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned char c : d) {
        s += hex[c >> 4];
        s += hex[c & 15];
    }
    return s;
}

/// Graph, empty-mempool timeline and 300 blocks of 2000 txs under dir.
void make_inputs(const TempDir& dir, const std::string& counts = "0")
{
    REQUIRE(lnme_run({"gen", "graph", "--scale-free", "--n", "120", "--m", "3", "--seed", "5", "--out", dir / "g"}).code == EXIT_OK);
    REQUIRE(lnme_run({"gen", "timeline", "--constant", "--count", counts, "--snapshots", "3001", "--out", dir / "t"}).code == EXIT_OK);
    REQUIRE(lnme_run({"gen", "blocks", "--count", "300", "--txs", "2000", "--first-height", "1000", "--out", dir / "b"}).code == EXIT_OK);
}

std::vector<std::string> scenario_args(const TempDir& dir)
{
    return {"--timeline", dir / "t/timeline.csv", "--blocks", dir / "b/blocks.csv", "--start", "1600000000"};
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

TEST_CASE("cli: help and version exit 0; bad usage exits 2")
{
    CHECK(lnme_run({"--help"}).code == EXIT_OK);
    CHECK(lnme_run({"--version"}).code == EXIT_OK);
    CHECK(lnme_run({}).code == EXIT_USAGE);
    CHECK(lnme_run({"bogus"}).code == EXIT_USAGE);
    CHECK(lnme_run({"solve", "--k", "2"}).code == EXIT_USAGE);
    CHECK(lnme_run({"solve", "--graph", "x.csv", "--objective", "nope", "--k", "2"}).code != EXIT_OK);
}

TEST_CASE("cli: gen and solve write outputs listed in the manifest")
{
    TempDir dir;
    make_inputs(dir);
    const auto r = lnme_run({"solve", "--graph", dir / "g/graph.csv", "--k", "4", "--out", dir / "s"});
    REQUIRE(r.code == EXIT_OK);
    const auto manifest = nlohmann::json::parse(slurp(dir / "s/manifest.json"));
    CHECK(manifest["tool"] == "lnme");
    CHECK(manifest["command"] == "solve");
    REQUIRE(manifest["outputs"].size() == 2);
    for (const auto& o : manifest["outputs"]) {
        CHECK(o["sha256"] == sha256(slurp(dir / ("s/" + o["path"].get<std::string>()))));
    }
    REQUIRE(manifest["inputs"].size() == 1);
    CHECK(manifest["inputs"][0]["sha256"] == sha256(slurp(dir / "g/graph.csv")));
    // The output directory is not part of the recorded command line.
    for (const auto& a : manifest["args"]) CHECK(a.get<std::string>().find("/s") == std::string::npos);

    const auto cut = nlohmann::json::parse(slurp(dir / "s/cut.json"));
    CHECK(cut["k"] == 4);
    CHECK(cut["coalition"].size() == 4);

    const auto seeds = nlohmann::json::parse(slurp(dir / "g/manifest.json"))["seeds"];
    CHECK(seeds == nlohmann::json::array({5}));
}

TEST_CASE("cli: exact solver over budget exits 4")
{
    TempDir dir;
    make_inputs(dir);
    const auto r = lnme_run({"solve", "--graph", dir / "g/graph.csv", "--k", "6", "--exact", "--budget", "1000", "--out", dir / "e"});
    CHECK(r.code == EXIT_EXHAUSTED);
    CHECK(r.err.find("budget") != std::string::npos);
    CHECK(fs::exists(dir / "e/manifest.json"));
}

TEST_CASE("cli: data errors exit 3")
{
    TempDir dir;
    CHECK(lnme_run({"solve", "--graph", dir / "missing.csv", "--k", "2", "--out", dir / "o"}).code == EXIT_DATA);
    {
        std::ofstream(dir / "bad.csv") << "channel_id,node1,node2,capacity_sat\nx,a,b,notanumber\n";
    }
    CHECK(lnme_run({"solve", "--graph", dir / "bad.csv", "--k", "1", "--out", dir / "o"}).code == EXIT_DATA);
    {
        std::ofstream(dir / "cut.json") << "{ not json";
    }
    make_inputs(dir);
    CHECK(lnme_run(std::vector<std::string>{"zombie", "--cut-file", dir / "cut.json", "--fee", "5", "--out", dir / "z"} + scenario_args(dir))
              .code == EXIT_DATA);
}

TEST_CASE("cli: zombie usage checks")
{
    TempDir dir;
    make_inputs(dir);
    const auto base = scenario_args(dir);
    CHECK(lnme_run(std::vector<std::string>{"zombie", "--channels", "10", "--out", dir / "z"} + base).code == EXIT_USAGE);
    CHECK(lnme_run(std::vector<std::string>{"zombie", "--channels", "10", "--fee", "1.234", "--out", dir / "z"} + base).code == EXIT_USAGE);
    CHECK(lnme_run(std::vector<std::string>{"zombie", "--channels", "10", "--dynamic", "--initial-fee", "5", "--out", dir / "z"} + base).code ==
          EXIT_USAGE);
    CHECK(lnme_run(std::vector<std::string>{"zombie", "--channels", "10", "--dynamic", "--initial-fee", "5", "--step", "2", "--beta", "1",
                                            "--out", dir / "z"} +
                   base)
              .code == EXIT_USAGE);
    CHECK(lnme_run({"zombie", "--channels", "10", "--fee", "5", "--timeline", dir / "t/timeline.csv", "--blocks", dir / "b/blocks.csv",
                    "--out", dir / "z"})
              .code == EXIT_USAGE);
}

TEST_CASE("cli: zombie on an empty mempool closes in ceil(n/2000) blocks")
{
    TempDir dir;
    make_inputs(dir);
    const auto r = lnme_run(std::vector<std::string>{"zombie", "--channels", "4001", "--fee", "1", "--event-log", "--out", dir / "z"} +
                            scenario_args(dir));
    REQUIRE(r.code == EXIT_OK);
    const auto summary = nlohmann::json::parse(slurp(dir / "z/summary.json"));
    CHECK(summary["blocks_to_close_all"] == 3);
    CHECK(summary["horizon_exhausted"] == false);
    std::istringstream events(slurp(dir / "z/events.jsonl"));
    std::string line;
    std::size_t confirmed = 0;
    while (std::getline(events, line)) confirmed += nlohmann::json::parse(line)["confirmed"].size();
    CHECK(confirmed == 4001);
}

TEST_CASE("cli: saturated zombie run exits 4 with outputs written")
{
    TempDir dir;
    make_inputs(dir, "100000");
    const auto r = lnme_run(std::vector<std::string>{"zombie", "--channels", "100", "--fee", "1", "--max-blocks", "50", "--out", dir / "z"} +
                            scenario_args(dir));
    CHECK(r.code == EXIT_EXHAUSTED);
    const auto summary = nlohmann::json::parse(slurp(dir / "z/summary.json"));
    CHECK(summary["horizon_exhausted"] == true);
    CHECK(summary["remaining"] == 100);
    CHECK(summary["blocks_to_close_all"].is_null());
}

TEST_CASE("cli: zombie fee sweep writes one row per fee")
{
    TempDir dir;
    make_inputs(dir);
    REQUIRE(lnme_run(std::vector<std::string>{"zombie", "--channels", "5000", "--fees", "1,2,3", "--out", dir / "z"} + scenario_args(dir))
                .code == EXIT_OK);
    const auto csv = slurp(dir / "z/sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("cli: doublespend report and profit table")
{
    TempDir dir;
    make_inputs(dir);
    REQUIRE(lnme_run({"solve", "--graph", dir / "g/graph.csv", "--k", "3", "--out", dir / "s"}).code == EXIT_OK);
    const auto cut = nlohmann::json::parse(slurp(dir / "s/cut.json"));
    const auto r = lnme_run(std::vector<std::string>{"doublespend", "--cut-file", dir / "s/cut.json", "--out", dir / "d"} + scenario_args(dir));
    REQUIRE(r.code == EXIT_OK);
    const auto report = nlohmann::json::parse(slurp(dir / "d/report.json"));
    CHECK(report["attacked"] == cut["edge_count"]);
    // Empty mempool: every penalty beats its sweep.
    CHECK(report["compromised"] == 0);
    CHECK(report["defended"] == cut["edge_count"]);

    REQUIRE(lnme_run(std::vector<std::string>{"doublespend", "--graph", dir / "g/graph.csv", "--ks", "1,2", "--out", dir / "p"} +
                     scenario_args(dir))
                .code == EXIT_OK);
    const auto csv = slurp(dir / "p/profit.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    CHECK(lnme_run(std::vector<std::string>{"doublespend", "--cut-file", dir / "s/cut.json", "--delay", "fixed:x", "--out", dir / "d"} +
                   scenario_args(dir))
              .code == EXIT_USAGE);
    CHECK(lnme_run(std::vector<std::string>{"doublespend", "--cut-file", dir / "s/cut.json", "--graph", dir / "g/graph.csv", "--out",
                                            dir / "d"} +
                   scenario_args(dir))
              .code == EXIT_USAGE);
}

TEST_CASE("cli: doublespend with undecided channels warns and exits 4")
{
    TempDir dir;
    make_inputs(dir);
    REQUIRE(lnme_run({"solve", "--graph", dir / "g/graph.csv", "--k", "2", "--out", dir / "s"}).code == EXIT_OK);
    // A one-block horizon: commitments confirm in it, penalties never get a block.
    const auto r = lnme_run(std::vector<std::string>{"doublespend", "--cut-file", dir / "s/cut.json", "--max-blocks", "1", "--out", dir / "d"} +
                            scenario_args(dir));
    const auto cut = nlohmann::json::parse(slurp(dir / "s/cut.json"));
    const auto report = nlohmann::json::parse(slurp(dir / "d/report.json"));
    CHECK(report["undecided"] == cut["edge_count"]);
    CHECK(report["realized_profit_msat"] == 0);
    CHECK(r.code == EXIT_EXHAUSTED);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("cli: rerun reproduces outputs and detects changed inputs")
{
    TempDir dir;
    make_inputs(dir);
    REQUIRE(lnme_run({"solve", "--graph", dir / "g/graph.csv", "--k", "3", "--out", dir / "s"}).code == EXIT_OK);
    REQUIRE(lnme_run(std::vector<std::string>{"doublespend", "--cut-file", dir / "s/cut.json", "--out", dir / "d"} + scenario_args(dir)).code ==
            EXIT_OK);

    const auto r = lnme_run({"rerun", dir / "d/manifest.json", "--out", dir / "d2"});
    CHECK(r.code == EXIT_OK);
    CHECK(slurp(dir / "d/report.json") == slurp(dir / "d2/report.json"));
    CHECK(slurp(dir / "d/manifest.json") == slurp(dir / "d2/manifest.json"));

    // Tampered output digest.
    auto manifest = nlohmann::ordered_json::parse(slurp(dir / "d/manifest.json"));
    manifest["outputs"][0]["sha256"] = std::string(64, '0');
    {
        std::ofstream(dir / "tampered.json") << manifest.dump(2);
    }
    CHECK(lnme_run({"rerun", dir / "tampered.json", "--out", dir / "d3"}).code == EXIT_DATA);

    // Changed input.
    {
        std::ofstream(dir / "b/blocks.csv", std::ios::app) << "\n";
    }
    CHECK(lnme_run({"rerun", dir / "d/manifest.json", "--out", dir / "d4"}).code == EXIT_DATA);
}

TEST_CASE("cli: reports do not depend on LNME_THREADS")
{
    TempDir dir;
    make_inputs(dir, "50");
    const char* saved = std::getenv("LNME_THREADS");
    const std::string saved_value = saved ? saved : "";
    std::vector<std::string> reports;
    for (const char* threads : {"1", "8"}) {
        setenv("LNME_THREADS", threads, 1);
        const auto out = dir / (std::string("p") + threads);
        REQUIRE(lnme_run(std::vector<std::string>{"doublespend", "--graph", dir / "g/graph.csv", "--ks", "1,2,3,4", "--out", out} +
                         scenario_args(dir))
                    .code == EXIT_OK);
        reports.push_back(slurp(out + "/profit.csv"));
        REQUIRE(lnme_run({"solve", "--graph", dir / "g/graph.csv", "--k", "2", "--exact", "--out", out + "x"}).code == EXIT_OK);
        reports.push_back(slurp(out + "x/cut.json"));
    }
    if (saved) {
        setenv("LNME_THREADS", saved_value.c_str(), 1);
    } else {
        unsetenv("LNME_THREADS");
    }
    CHECK(reports[0] == reports[2]);
    CHECK(reports[1] == reports[3]);
}
