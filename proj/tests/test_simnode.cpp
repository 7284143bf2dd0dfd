/**************************************************************************
 * test_simnode.cpp
 *
 * Copyright 2026 The pbec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#include <filesystem>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include <pbec/simnode.hpp>

using namespace pbec;
using namespace pbec::sim;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t len, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<std::uint8_t> out(len);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(byte(rng));
    return out;
}

ClusterConfig gen_cfg(int n, int k, int s, int p) {
    ClusterConfig cfg;
    cfg.scheme = Scheme::gen;
    cfg.n = n;
    cfg.k = k;
    cfg.s = s;
    cfg.p = p;
    return cfg;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("pbec_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("crc32 matches the reference vector") {
    const std::string probe = "123456789";
    CHECK(crc32({reinterpret_cast<const std::uint8_t*>(probe.data()), probe.size()}) ==
          0xCBF43926u);
    CHECK(crc32({}) == 0u);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(gen_cfg(8, 4, 7, 2).validate(), ParamError);
    ClusterConfig r2;
    r2.scheme = Scheme::rsr2;
    r2.n = 6;
    r2.k = 4;
    CHECK_THROWS_AS(r2.validate(), ParamError);
    CHECK(gen_cfg(8, 4, 3, 2).stripes() == 5);
    CHECK(gen_cfg(8, 4, 3, 2).lane_bytes() == 20);
}

TEST_CASE("empty payload is a valid zero-group cluster") {
    auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
    const auto m = cluster.ingest({});
    CHECK(m.lane_count == 0);
    CHECK(m.payload_length == 0);
    CHECK(cluster.read_payload().empty());
    CHECK(cluster.verify());
}

TEST_CASE("single-lane and megabyte payloads round trip") {
    for (const std::size_t len : {std::size_t(20), std::size_t(33), std::size_t(1) << 20}) {
        auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
        const auto payload = random_bytes(len, 7u + static_cast<std::uint32_t>(len));
        cluster.ingest(payload);
        CHECK(cluster.read_payload() == payload);
        CHECK(cluster.verify());
    }
}

TEST_CASE("store files carry the fixed little-endian header") {
    const auto header = store_header(gen_cfg(8, 4, 3, 2));
    const std::vector<std::uint8_t> expect{'P', 'B', 'E', 'C', 1, 0, 8, 0,
                                           4,   0,   3,   0,   2, 0, 20, 0, 0, 0};
    CHECK(header == expect);

    ClusterConfig r2;
    r2.scheme = Scheme::rsr2;
    r2.n = 10;
    r2.k = 5;
    const auto h2 = store_header(r2);
    const std::vector<std::uint8_t> expect2{'P', 'B', 'E', 'C', 1, 0, 10, 0,
                                            5,   0,   7,   0,   0, 0, 35, 0, 0, 0};
    CHECK(h2 == expect2);
}

TEST_CASE("disk clusters reopen with identical content") {
    TempDir tmp;
    const auto payload = random_bytes(4096, 99);
    {
        auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2), tmp.path);
        cluster.ingest(payload);
    }
    auto reopened = Cluster::open(tmp.path);
    CHECK(reopened.block_groups() == (4096 + 19) / 20);
    CHECK(reopened.read_payload() == payload);
    CHECK(reopened.verify());
    CHECK(std::filesystem::exists(tmp.path / "node_000" / "store.pbec"));

    // deleting a node directory shows up as a failed node
    std::filesystem::remove_all(tmp.path / "node_003");
    auto degraded = Cluster::open(tmp.path);
    CHECK(degraded.node_failed(3));
    CHECK(degraded.read_payload() == payload); // still decodable
    const auto rep = degraded.repair(3);
    CHECK(!rep.noop);
    CHECK(std::filesystem::exists(tmp.path / "node_003" / "store.pbec"));
    auto healed = Cluster::open(tmp.path);
    CHECK(!healed.node_failed(3));
    CHECK(healed.read_payload() == payload);
}

TEST_CASE("manifest round trips through its text form") {
    auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
    cluster.ingest(random_bytes(100, 3));
    const auto m = cluster.manifest();
    const auto parsed = Manifest::parse(m.serialize());
    CHECK(parsed.layout == "gen");
    CHECK(parsed.n == 8);
    CHECK(parsed.k == 4);
    CHECK(parsed.s == 3);
    CHECK(parsed.p == 2);
    CHECK(parsed.lane_count == 5);
    CHECK(parsed.payload_length == 100);
    CHECK(parsed.checksum == m.checksum);
    CHECK_THROWS_AS(Manifest::parse("layout=gen\n"), DataError);
}

TEST_CASE("repair restores every node bit-exactly") {
    const ClusterConfig cfgs[] = {gen_cfg(8, 4, 3, 2), gen_cfg(12, 8, 4, 2),
                                  [] {
                                      ClusterConfig c;
                                      c.scheme = Scheme::rsr2;
                                      c.n = 10;
                                      c.k = 5;
                                      return c;
                                  }(),
                                  [] {
                                      ClusterConfig c;
                                      c.scheme = Scheme::mds;
                                      c.n = 8;
                                      c.k = 4;
                                      return c;
                                  }()};
    for (const auto& cfg : cfgs) {
        auto cluster = Cluster::create(cfg);
        cluster.ingest(random_bytes(static_cast<std::size_t>(cfg.lane_bytes()) * 7 + 3, 555));
        for (int v = 0; v < cfg.n; ++v) {
            const auto before = cluster.node_cells(v);
            cluster.fail_node(v);
            CHECK(cluster.node_failed(v));
            const auto rep = cluster.repair(v);
            CHECK(!rep.noop);
            CHECK(rep.symbols == cluster.last_ledger().total());
            REQUIRE(cluster.node_cells(v) == before);
        }
        CHECK(cluster.verify());
    }
}

TEST_CASE("repairing a healthy node is a no-op with an empty ledger") {
    auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
    cluster.ingest(random_bytes(200, 17));
    const auto rep = cluster.repair(2);
    CHECK(rep.noop);
    CHECK(rep.symbols == 0);
    CHECK(cluster.last_ledger().total() == 0);
    CHECK(cluster.last_ledger().reads.empty());
}

TEST_CASE("ledger equals the closed-form bandwidth for each layout") {
    // generalized: one systematic repair downloads kp + s + sum(size-1)
    auto gen = Cluster::create(gen_cfg(8, 4, 3, 2));
    gen.ingest(random_bytes(20, 1));
    gen.fail_node(0);
    CHECK(gen.repair(0).symbols == 14);
    // ledger entries carry (node, stripe, group) and aggregate per node
    const auto& ledger = gen.last_ledger();
    CHECK(ledger.reads.size() == 14);
    std::uint64_t sum = 0;
    for (const auto c : ledger.per_node)
        sum += c;
    CHECK(sum == 14);

    // plain MDS measures ratio 1 for any config
    ClusterConfig mds_cfg;
    mds_cfg.scheme = Scheme::mds;
    mds_cfg.n = 9;
    mds_cfg.k = 5;
    const ClusterConfig grid[] = {mds_cfg, gen_cfg(8, 4, 3, 2), gen_cfg(20, 10, 2, 1)};
    for (const auto& chk : validate_formulas(grid)) {
        CHECK(chk.match);
        if (chk.cfg.scheme == Scheme::mds)
            CHECK(chk.measured == Rational(1));
    }
}

TEST_CASE("parity repair downloads k cells per stripe") {
    auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
    cluster.ingest(random_bytes(20, 2));
    cluster.fail_node(6);
    const auto rep = cluster.repair(6);
    CHECK(rep.symbols == 4 * 5);
}

TEST_CASE("durability under up to r failures") {
    const auto payload = random_bytes(999, 31);
    for (const auto& fail_set : {std::vector<int>{0, 5, 7, 2}, {4, 5, 6, 7}, {0, 1, 2, 3}}) {
        auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
        cluster.ingest(payload);
        for (const int v : fail_set)
            cluster.fail_node(v);
        CHECK(!cluster.data_loss());
        for (const int v : fail_set)
            cluster.repair(v);
        CHECK(cluster.read_payload() == payload);
        CHECK(cluster.verify());
    }
}

TEST_CASE("more than r failures is unrecoverable") {
    auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
    cluster.ingest(random_bytes(100, 8));
    for (const int v : {0, 1, 2, 3, 4})
        cluster.fail_node(v);
    CHECK(cluster.data_loss());
    CHECK_THROWS_AS(cluster.repair(0), UnrecoverableError);
    CHECK_THROWS_AS(cluster.read_payload(), DataError);
}

TEST_CASE("operation tallies follow the per-symbol profile") {
    const auto gp = make_gen_params(8, 4, 3, 2);
    const auto asg = build_assignment(gp);
    auto cluster = Cluster::create(gen_cfg(8, 4, 3, 2));
    cluster.ingest(random_bytes(20 * 5, 21)); // five block groups
    for (int l = 0; l < 4; ++l) {
        cluster.fail_node(l);
        const auto rep = cluster.repair(l);
        const auto prof = repair_op_profile(gp, asg, l);
        // per block group: p piggybacked symbols and s protected symbols
        const Rational muls(static_cast<long long>(rep.mul_ops), 5);
        const Rational adds(static_cast<long long>(rep.add_ops), 5);
        CHECK(muls == Rational(static_cast<long long>(prof.piggybacked_mul) * gp.p +
                               static_cast<long long>(prof.protected_mul) * gp.s));
        CHECK(adds == Rational(static_cast<long long>(prof.piggybacked_add) * gp.p) +
                          prof.protected_add * Rational(gp.s));
    }
}
