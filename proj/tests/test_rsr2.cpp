/**************************************************************************
 * test_rsr2.cpp
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

#include <numeric>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include <pbec/analysis.hpp>
#include <pbec/rsr2.hpp>

using namespace pbec;

namespace {

std::vector<gf::Vec> random_messages(int k, int alpha, std::mt19937& rng) {
    std::uniform_int_distribution<int> byte(0, 255);
    std::vector<gf::Vec> msgs(static_cast<std::size_t>(alpha), gf::Vec(static_cast<std::size_t>(k)));
    for (auto& m : msgs)
        for (auto& e : m)
            e = gf::Elem(byte(rng));
    return msgs;
}

} // namespace

TEST_CASE("node sets split as evenly as possible") {
    const auto rc = build_rsr2(10, 5);
    CHECK(rc.sets.t_l == 1);
    CHECK(rc.sets.t_h == 2);
    CHECK(rc.sets.t == 1);
    REQUIRE(rc.sets.members.size() == 4);
    CHECK(rc.sets.members[0] == std::vector<int>{0, 1});
    CHECK(rc.sets.members[1] == std::vector<int>{2});
    CHECK(rc.sets.members[2] == std::vector<int>{3});
    CHECK(rc.sets.members[3] == std::vector<int>{4});

    const auto rc2 = build_rsr2(20, 10);
    CHECK(rc2.sets.t == 1);
    std::vector<int> sizes;
    for (const auto& s : rc2.sets.members)
        sizes.push_back(static_cast<int>(s.size()));
    CHECK(sizes == std::vector<int>{2, 1, 1, 1, 1, 1, 1, 1, 1});

    // union must be exactly the systematic nodes, sizes within 1 of each other
    for (const auto& [n, k] : {std::pair{8, 4}, {12, 8}, {9, 2}, {14, 6}}) {
        const auto rc3 = build_rsr2(n, k);
        int total = 0, lo = k, hi = 0;
        for (const auto& s : rc3.sets.members) {
            total += static_cast<int>(s.size());
            lo = std::min<int>(lo, static_cast<int>(s.size()));
            hi = std::max<int>(hi, static_cast<int>(s.size()));
        }
        CHECK(total == k);
        CHECK(hi - lo <= 1);
    }
}

TEST_CASE("selection vectors sum back to the parity rows") {
    for (const auto& [n, k] : {std::pair{8, 4}, {10, 5}, {12, 8}, {20, 10}}) {
        const auto rc = build_rsr2(n, k);
        for (int i = 2; i <= rc.r(); ++i) {
            gf::Vec sum(static_cast<std::size_t>(k), 0);
            for (int j = 1; j <= rc.r() - 1; ++j) {
                const auto q = rc.selection(i, j);
                for (int c = 0; c < k; ++c) {
                    // q is zero outside its own node set
                    if (rc.sets.set_of[std::size_t(c)] != j - 1)
                        CHECK(q[std::size_t(c)] == 0);
                    sum[std::size_t(c)] ^= q[std::size_t(c)];
                }
            }
            CHECK(sum == rc.code.parity_rows[std::size_t(i - 1)]);
        }
    }
}

TEST_CASE("eval points are distinct nonzero field elements") {
    const auto rc = build_rsr2(20, 10);
    std::vector<bool> seen(256, false);
    for (int i = 2; i <= rc.r(); ++i) {
        const auto e = rc.eval_point(i);
        CHECK(e != 0);
        CHECK(!seen[e]);
        seen[e] = true;
    }
}

TEST_CASE("fewer than 3 parities is rejected") {
    CHECK_THROWS_AS(build_rsr2(6, 4), ParamError);
    CHECK_THROWS_AS(build_rsr2(6, 5), ParamError);
    CHECK_NOTHROW(build_rsr2(7, 4));
}

TEST_CASE("all-zero messages encode to an all-zero array") {
    const auto rc = build_rsr2(8, 4);
    const std::vector<gf::Vec> zeros(std::size_t(rc.alpha), gf::Vec(4, 0));
    const auto enc = encode_rsr2(rc, zeros);
    for (int v = 0; v < 8; ++v)
        for (int s = 0; s < rc.alpha; ++s)
            CHECK(enc.array.at(v, s) == 0);
}

TEST_CASE("node k+1 keeps plain first parities and systematic rows stay raw") {
    std::mt19937 rng(1);
    const auto rc = build_rsr2(10, 5);
    const auto msgs = random_messages(5, rc.alpha, rng);
    const auto enc = encode_rsr2(rc, msgs);
    for (int s = 0; s < rc.alpha; ++s) {
        for (int c = 0; c < 5; ++c)
            CHECK(enc.array.at(c, s) == msgs[std::size_t(s)][std::size_t(c)]);
        CHECK(enc.array.at(5, s) == gf::dot(rc.code.parity_rows[0], msgs[std::size_t(s)]));
    }
}

TEST_CASE("stored layout equals the causal layout after its within-row transform") {
    std::mt19937 rng(2);
    const auto rc = build_rsr2(10, 5);
    const int r = rc.r(), k = rc.k();
    const auto msgs = random_messages(k, rc.alpha, rng);
    const auto stored = encode_rsr2(rc, msgs);

    // causal form: stripe r-1 of node k+i carries the v-hat piggybacks of
    // every other node set; stripes r..2r-3 carry the v piggybacks
    ArrayBuilder b(rc.code, msgs);
    for (int i = 2; i <= r; ++i) {
        const int node = k + i - 1;
        const auto slots = rc.slot_sets(i);
        gf::Vec hat_sum(static_cast<std::size_t>(k) * static_cast<std::size_t>(rc.alpha), 0);
        for (const int j : slots) {
            const auto h = piggyback_coeffs(rc, i, j, /*hat=*/true);
            for (std::size_t idx = 0; idx < h.size(); ++idx)
                hat_sum[idx] ^= h[idx];
        }
        b.attach_piggyback(node, r - 2, hat_sum);
        for (std::size_t slot = 0; slot < slots.size(); ++slot)
            b.attach_piggyback(node, (r - 1) + static_cast<int>(slot),
                               piggyback_coeffs(rc, i, slots[std::size_t(slot)]));
    }
    const auto causal = std::move(b).finish();

    // the causal form is recursively decodable and both decoders agree
    const std::vector<int> nodes{0, 2, 5, 6, 9};
    CHECK(decode_recursive(causal, nodes) == msgs);
    CHECK(decode_full(causal, nodes) == msgs);

    for (int i = 2; i <= r; ++i) {
        const int node = k + i - 1;
        for (int s = 0; s < rc.alpha; ++s) {
            gf::Elem expect = causal.array.at(node, s);
            if (s == r - 2)
                for (int s2 = r - 1; s2 < rc.alpha; ++s2)
                    expect ^= causal.array.at(node, s2);
            CHECK(stored.array.at(node, s) == expect);
        }
    }
}

TEST_CASE("stored arrays decode from any k nodes") {
    std::mt19937 rng(3);
    const auto rc = build_rsr2(8, 4);
    const auto msgs = random_messages(4, rc.alpha, rng);
    const auto enc = encode_rsr2(rc, msgs);
    CHECK(decode_full(enc, std::vector<int>{0, 1, 2, 3}) == msgs);
    CHECK(decode_full(enc, std::vector<int>{4, 5, 6, 7}) == msgs);
    CHECK(decode_full(enc, std::vector<int>{1, 3, 5, 7}) == msgs);
    CHECK(enc.map.rank() == std::size_t(4 * rc.alpha));

    // 200 random k-subsets of the larger code
    const auto rc2 = build_rsr2(20, 10);
    const auto msgs2 = random_messages(10, rc2.alpha, rng);
    const auto enc2 = encode_rsr2(rc2, msgs2);
    std::vector<int> all(20);
    std::iota(all.begin(), all.end(), 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::shuffle(all.begin(), all.end(), rng);
        const std::vector<int> nodes(all.begin(), all.begin() + 10);
        REQUIRE(decode_full(enc2, nodes) == msgs2);
    }
}

TEST_CASE("repair downloads exactly (r-2)k + (r-1)|S| symbols") {
    std::mt19937 rng(4);
    const auto rc = build_rsr2(10, 5);
    const int r = rc.r();
    const auto msgs = random_messages(5, rc.alpha, rng);
    const auto enc = encode_rsr2(rc, msgs);
    for (int l = 0; l < 5; ++l) {
        const auto [column, rep] = repair_systematic_rsr2(rc, enc, l);
        const int size = rc.sets.size_of_set(rc.sets.set_of[std::size_t(l)]);
        CHECK(rep.symbol_count() == std::size_t((r - 2) * 5 + (r - 1) * size));
        // no duplicate downloads
        auto cells = rep.downloaded;
        std::sort(cells.begin(), cells.end());
        CHECK(std::adjacent_find(cells.begin(), cells.end()) == cells.end());
    }
    // node 0 lives in the size-2 set: 15 + 4 + 4 = 23
    const auto [column, rep] = repair_systematic_rsr2(rc, enc, 0);
    CHECK(rep.symbol_count() == 23);
}

TEST_CASE("repair restores the erased column bitwise") {
    std::mt19937 rng(5);
    for (const auto& [n, k] : {std::pair{8, 4}, {10, 5}, {12, 8}, {20, 10}}) {
        const auto rc = build_rsr2(n, k);
        for (int fill = 0; fill < 100; ++fill) {
            const auto msgs = random_messages(k, rc.alpha, rng);
            const auto enc = encode_rsr2(rc, msgs);
            for (int l = 0; l < k; ++l) {
                const auto [column, rep] = repair_systematic_rsr2(rc, enc, l);
                for (int s = 0; s < rc.alpha; ++s)
                    REQUIRE(column[std::size_t(s)] == enc.array.at(l, s));
            }
        }
    }
}

TEST_CASE("average measured ratio equals the closed form") {
    std::mt19937 rng(6);
    for (const auto& [n, k] : {std::pair{8, 4}, {10, 5}, {12, 8}, {20, 10}, {10, 6}, {9, 6}}) {
        const auto rc = build_rsr2(n, k);
        const auto msgs = random_messages(k, rc.alpha, rng);
        const auto enc = encode_rsr2(rc, msgs);
        std::uint64_t total = 0;
        for (int l = 0; l < k; ++l)
            total += repair_systematic_rsr2(rc, enc, l).second.symbol_count();
        const Rational measured(static_cast<long long>(total),
                                static_cast<long long>(k) * k * rc.alpha);
        CHECK(measured == analysis::gamma1(n, k));
    }
    // when r-1 divides k the ratio meets its floor exactly
    CHECK(analysis::gamma1(10, 6) == Rational(3, 5));
    CHECK(analysis::gamma1(9, 6) == Rational(2, 3));
    CHECK(analysis::min_gamma1(4) == Rational(3, 5));
}

TEST_CASE("repair never touches the failed node") {
    std::mt19937 rng(7);
    const auto rc = build_rsr2(8, 4);
    const auto msgs = random_messages(4, rc.alpha, rng);
    const auto enc = encode_rsr2(rc, msgs);
    // the EncodedArray overload installs a reader that throws on access to
    // the failed node; reaching here means the access pattern is clean
    for (int l = 0; l < 4; ++l)
        CHECK_NOTHROW(repair_systematic_rsr2(rc, enc, l));
    CHECK_THROWS_AS(repair_systematic_rsr2(rc, enc, 5), ParamError);
}
