/**************************************************************************
 * simnode.hpp
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

#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "genpb.hpp"
#include "rsr2.hpp"

namespace pbec::sim {

inline std::uint32_t crc32(std::span<const std::uint8_t> data) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int b = 0; b < 8; ++b)
                c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = 0xFFFFFFFFu;
    for (const std::uint8_t byte : data)
        c = table[(c ^ byte) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

enum class Scheme { mds, rsr2, gen };

inline std::string scheme_name(Scheme s) {
    switch (s) {
    case Scheme::mds: return "mds";
    case Scheme::rsr2: return "rsr2";
    case Scheme::gen: return "gen";
    }
    throw ParamError("unknown scheme");
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "mds") return Scheme::mds;
    if (s == "rsr2") return Scheme::rsr2;
    if (s == "gen") return Scheme::gen;
    throw ParamError("unknown scheme '" + s + "' (expected mds, rsr2 or gen)");
}

struct ClusterConfig {
    Scheme scheme = Scheme::mds;
    int n = 0, k = 0;
    int s = 0, p = 0; // gen only

    int stripes() const {
        switch (scheme) {
        case Scheme::mds: return 1;
        case Scheme::rsr2: return 2 * (n - k) - 3;
        case Scheme::gen: return s + p;
        }
        throw ParamError("unknown scheme");
    }

    int lane_bytes() const { return k * stripes(); }

    void validate() const {
        if (k < 2 || k >= n || n > 255)
            throw ParamError("code parameters must satisfy 2 <= k < n <= 255");
        if (scheme == Scheme::rsr2 && n - k < 3)
            throw ParamError("RSR-II requires at least 3 parities");
        if (scheme == Scheme::gen) {
            if (s < 1 || p < 1)
                throw ParamError("generalized code needs s >= 1 and p >= 1");
            if ((n - k - 1) * p < s)
                throw ParamError("insufficient Region D capacity: (r-1)*p >= s is required (r=" +
                                 std::to_string(n - k) + ", s=" + std::to_string(s) +
                                 ", p=" + std::to_string(p) + ")");
        }
    }
};

/// Every cell fetched during the last repair, plus per-source totals.
/// Within one repair no cell (node, stripe, block group) is read twice.
struct BandwidthLedger {
    struct Read {
        int node;
        int stripe;
        std::uint64_t group;
    };

    std::vector<Read> reads;
    std::vector<std::uint64_t> per_node;

    std::uint64_t total() const { return reads.size(); }

    void reset(int n) {
        reads.clear();
        per_node.assign(static_cast<std::size_t>(n), 0);
    }

    void record(int node, int stripe, std::uint64_t group) {
        reads.push_back({node, stripe, group});
        ++per_node[static_cast<std::size_t>(node)];
    }
};

struct ClusterRepairReport {
    int node = -1;
    bool noop = false;
    std::uint64_t block_groups = 0;
    std::uint64_t symbols = 0;
    std::uint64_t mul_ops = 0;
    std::uint64_t add_ops = 0;
};

struct Manifest {
    std::string layout;
    int n = 0, k = 0, s = 0, p = 0;
    std::uint64_t lane_count = 0;
    std::uint64_t payload_length = 0;
    std::uint32_t checksum = 0;

    std::string serialize() const {
        char sum[16];
        std::snprintf(sum, sizeof sum, "%08x", checksum);
        std::string out;
        out += "layout=" + layout + "\n";
        out += "n=" + std::to_string(n) + "\n";
        out += "k=" + std::to_string(k) + "\n";
        out += "s=" + std::to_string(s) + "\n";
        out += "p=" + std::to_string(p) + "\n";
        out += "lane_count=" + std::to_string(lane_count) + "\n";
        out += "payload_length=" + std::to_string(payload_length) + "\n";
        out += "checksum=";
        out += sum;
        out += "\n";
        return out;
    }

    static Manifest parse(const std::string& text) {
        Manifest m;
        bool have[8] = {};
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string::npos)
                eol = text.size();
            const std::string line = text.substr(pos, eol - pos);
            pos = eol + 1;
            if (line.empty())
                continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw DataError("manifest: malformed line '" + line + "'");
            const std::string key = line.substr(0, eq), val = line.substr(eq + 1);
            try {
                parse_field(m, key, val, have);
            } catch (const DataError&) {
                throw;
            } catch (const std::exception&) {
                throw DataError("manifest: bad value for '" + key + "'");
            }
        }
        for (const bool h : have)
            if (!h)
                throw DataError("manifest: missing field");
        return m;
    }

private:
    static void parse_field(Manifest& m, const std::string& key, const std::string& val,
                            bool (&have)[8]) {
        if (key == "layout") {
            m.layout = val;
            have[0] = true;
        } else if (key == "n") {
            m.n = std::stoi(val);
            have[1] = true;
        } else if (key == "k") {
            m.k = std::stoi(val);
            have[2] = true;
        } else if (key == "s") {
            m.s = std::stoi(val);
            have[3] = true;
        } else if (key == "p") {
            m.p = std::stoi(val);
            have[4] = true;
        } else if (key == "lane_count") {
            m.lane_count = std::stoull(val);
            have[5] = true;
        } else if (key == "payload_length") {
            m.payload_length = std::stoull(val);
            have[6] = true;
        } else if (key == "checksum") {
            m.checksum = static_cast<std::uint32_t>(std::stoul(val, nullptr, 16));
            have[7] = true;
        } else {
            throw DataError("manifest: unknown key '" + key + "'");
        }
    }
};

namespace detail {

inline constexpr char kMagic[4] = {'P', 'B', 'E', 'C'};
inline constexpr std::uint16_t kStoreVersion = 1;
inline constexpr std::size_t kHeaderBytes = 18;

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t x) {
    out.push_back(static_cast<std::uint8_t>(x & 0xff));
    out.push_back(static_cast<std::uint8_t>(x >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>((x >> (8 * i)) & 0xff));
}

inline std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (unsigned(p[1]) << 8));
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
    return p[0] | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

} // namespace detail

/// Little-endian store header: magic "PBEC", version, n, k, the stripe
/// parameters (s and p for the generalized layout, stripe count and 0
/// otherwise) and the lane size in bytes. Cell bytes follow, ordered by
/// (block group, stripe).
inline std::vector<std::uint8_t> store_header(const ClusterConfig& cfg) {
    std::vector<std::uint8_t> h;
    h.reserve(detail::kHeaderBytes);
    h.insert(h.end(), std::begin(detail::kMagic), std::end(detail::kMagic));
    detail::put_u16(h, detail::kStoreVersion);
    detail::put_u16(h, static_cast<std::uint16_t>(cfg.n));
    detail::put_u16(h, static_cast<std::uint16_t>(cfg.k));
    if (cfg.scheme == Scheme::gen) {
        detail::put_u16(h, static_cast<std::uint16_t>(cfg.s));
        detail::put_u16(h, static_cast<std::uint16_t>(cfg.p));
    } else {
        detail::put_u16(h, static_cast<std::uint16_t>(cfg.stripes()));
        detail::put_u16(h, 0);
    }
    detail::put_u32(h, static_cast<std::uint32_t>(cfg.lane_bytes()));
    return h;
}

/// A simulated storage cluster: one store per node holding one byte per
/// (block group, stripe). Each lane of k*stripes payload bytes becomes one
/// block group. Backed either by memory or by one directory per node under
/// a cluster root.
class Cluster {
public:
    static Cluster create(ClusterConfig cfg) {
        cfg.validate();
        Cluster c(std::move(cfg));
        return c;
    }

    static Cluster create(ClusterConfig cfg, const std::filesystem::path& root) {
        cfg.validate();
        Cluster c(std::move(cfg));
        c.root_ = root;
        std::error_code ec;
        std::filesystem::create_directories(root, ec);
        if (ec)
            throw IoError("cannot create cluster root " + root.string());
        c.flush_all();
        return c;
    }

    static Cluster open(const std::filesystem::path& root) {
        std::ifstream in(root / "manifest.txt");
        if (!in)
            throw IoError("cannot open manifest in " + root.string());
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const Manifest m = Manifest::parse(text);
        ClusterConfig cfg;
        cfg.scheme = parse_scheme(m.layout);
        cfg.n = m.n;
        cfg.k = m.k;
        cfg.s = m.s;
        cfg.p = m.p;
        cfg.validate();
        Cluster c(std::move(cfg));
        c.root_ = root;
        c.lanes_ = m.lane_count;
        c.payload_len_ = m.payload_length;
        c.checksum_ = m.checksum;
        for (int v = 0; v < c.cfg_.n; ++v)
            c.stores_[static_cast<std::size_t>(v)] = c.read_store_file(v);
        return c;
    }

    const ClusterConfig& config() const { return cfg_; }
    std::uint64_t block_groups() const { return lanes_; }
    std::uint64_t payload_length() const { return payload_len_; }
    std::uint32_t payload_checksum() const { return checksum_; }
    const BandwidthLedger& last_ledger() const { return ledger_; }
    const LinearCellMap& cell_map() const { return map_; }

    bool node_failed(int v) const { return !stores_[check_node(v)].has_value(); }

    int alive_count() const {
        int alive = 0;
        for (const auto& s : stores_)
            if (s)
                ++alive;
        return alive;
    }

    bool data_loss() const { return alive_count() < cfg_.k; }

    Manifest manifest() const {
        Manifest m;
        m.layout = scheme_name(cfg_.scheme);
        m.n = cfg_.n;
        m.k = cfg_.k;
        m.s = cfg_.s;
        m.p = cfg_.p;
        m.lane_count = lanes_;
        m.payload_length = payload_len_;
        m.checksum = checksum_;
        return m;
    }

    /// Splits the payload into lanes, encodes each lane into one block
    /// group and stores the cells. Replaces any previous content.
    Manifest ingest(std::span<const std::uint8_t> payload) {
        const std::size_t lane = static_cast<std::size_t>(cfg_.lane_bytes());
        lanes_ = (payload.size() + lane - 1) / lane;
        payload_len_ = payload.size();
        checksum_ = crc32(payload);
        const int stripes = cfg_.stripes();
        for (int v = 0; v < cfg_.n; ++v)
            stores_[static_cast<std::size_t>(v)].emplace(lanes_ * static_cast<std::size_t>(stripes), 0);
        gf::Vec flat(lane, 0);
        for (std::uint64_t g = 0; g < lanes_; ++g) {
            const std::size_t base = static_cast<std::size_t>(g) * lane;
            for (std::size_t i = 0; i < lane; ++i)
                flat[i] = base + i < payload.size() ? payload[base + i] : 0;
            for (int v = 0; v < cfg_.n; ++v) {
                auto& cells = *stores_[static_cast<std::size_t>(v)];
                for (int s = 0; s < stripes; ++s)
                    cells[static_cast<std::size_t>(g) * static_cast<std::size_t>(stripes) +
                          static_cast<std::size_t>(s)] =
                        v < cfg_.k ? flat[map_.msg_col(s, v)] : gf::dot(map_.row(v, s), flat);
            }
        }
        flush_all();
        return manifest();
    }

    /// Reassembles the payload, decoding around failed nodes if necessary.
    std::vector<std::uint8_t> read_payload() const {
        if (data_loss())
            throw DataError("unrecoverable: fewer than k nodes available");
        const int stripes = cfg_.stripes();
        const std::size_t lane = static_cast<std::size_t>(cfg_.lane_bytes());
        std::vector<std::uint8_t> out(lanes_ * lane);
        bool systematic_ok = true;
        for (int c = 0; c < cfg_.k; ++c)
            if (!stores_[static_cast<std::size_t>(c)])
                systematic_ok = false;
        std::vector<int> nodes;
        if (!systematic_ok)
            for (int v = 0; v < cfg_.n && static_cast<int>(nodes.size()) < cfg_.k; ++v)
                if (stores_[static_cast<std::size_t>(v)])
                    nodes.push_back(v);
        for (std::uint64_t g = 0; g < lanes_; ++g) {
            const std::size_t base = static_cast<std::size_t>(g) * lane;
            if (systematic_ok) {
                for (int s = 0; s < stripes; ++s)
                    for (int c = 0; c < cfg_.k; ++c)
                        out[base + map_.msg_col(s, c)] = cell_at(c, g, s);
            } else {
                const auto msgs = decode_full(map_, nodes, [&](int v, int s) {
                    return cell_at(v, g, s);
                });
                for (int s = 0; s < stripes; ++s)
                    for (int c = 0; c < cfg_.k; ++c)
                        out[base + map_.msg_col(s, c)] =
                            msgs[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
            }
        }
        out.resize(payload_len_);
        return out;
    }

    bool verify() const { return crc32(read_payload()) == checksum_; }

    void fail_node(int v) {
        stores_[check_node(v)].reset();
        if (root_) {
            std::error_code ec;
            std::filesystem::remove_all(node_dir(v), ec);
        }
    }

    /// Rebuilds a failed node bit-exactly. A healthy node is a no-op with
    /// an empty ledger. Uses the specialized systematic paths when every
    /// other node is intact, and decode-and-reencode otherwise (parity
    /// nodes, or repairs under additional concurrent failures).
    ClusterRepairReport repair(int v) {
        check_node(v);
        ledger_.reset(cfg_.n);
        ClusterRepairReport rep;
        rep.node = v;
        if (stores_[static_cast<std::size_t>(v)]) {
            rep.noop = true;
            return rep;
        }
        if (alive_count() < cfg_.k)
            throw UnrecoverableError("unrecoverable: need at least k surviving nodes");
        const int stripes = cfg_.stripes();
        const bool single_failure = alive_count() == cfg_.n - 1;
        std::vector<std::uint8_t> rebuilt(lanes_ * static_cast<std::size_t>(stripes), 0);
        std::vector<int> helper_nodes;
        if (!single_failure || v >= cfg_.k)
            for (int u = 0; u < cfg_.n && static_cast<int>(helper_nodes.size()) < cfg_.k; ++u)
                if (u != v && stores_[static_cast<std::size_t>(u)])
                    helper_nodes.push_back(u);
        std::vector<bool> seen;
        for (std::uint64_t g = 0; g < lanes_; ++g) {
            seen.assign(static_cast<std::size_t>(cfg_.n) * static_cast<std::size_t>(stripes), false);
            const auto reader = [&](int node, int s) {
                if (node == v || !stores_[static_cast<std::size_t>(node)])
                    throw InternalError("repair read an unavailable node");
                const std::size_t key = static_cast<std::size_t>(node) * static_cast<std::size_t>(stripes) +
                                        static_cast<std::size_t>(s);
                if (seen[key])
                    throw InternalError("duplicate cell read within one repair");
                seen[key] = true;
                ledger_.record(node, s, g);
                return cell_at(node, g, s);
            };
            gf::Vec column;
            if (single_failure && v < cfg_.k) {
                switch (cfg_.scheme) {
                case Scheme::mds: {
                    gf::Vec survivors;
                    survivors.reserve(static_cast<std::size_t>(cfg_.k - 1));
                    for (int c = 0; c < cfg_.k; ++c)
                        if (c != v)
                            survivors.push_back(reader(c, 0));
                    const gf::Elem parity = reader(cfg_.k, 0);
                    gf::OpCounter ops;
                    column.assign(1, repair_symbol(code_, v, survivors, parity, &ops));
                    rep.mul_ops += ops.mul;
                    rep.add_ops += ops.add;
                    break;
                }
                case Scheme::rsr2: {
                    auto got = repair_systematic_rsr2(*rsr2_, v, reader);
                    column = std::move(got.first);
                    rep.mul_ops += got.second.mul_ops;
                    rep.add_ops += got.second.add_ops;
                    break;
                }
                case Scheme::gen: {
                    auto got = repair_systematic_gen(*gen_, *asg_, v, reader);
                    column = std::move(got.first);
                    rep.mul_ops += got.second.mul_ops;
                    rep.add_ops += got.second.add_ops;
                    break;
                }
                }
            } else {
                const auto msgs = decode_full(map_, helper_nodes, reader);
                gf::Vec flat(static_cast<std::size_t>(cfg_.lane_bytes()));
                for (int s = 0; s < stripes; ++s)
                    for (int c = 0; c < cfg_.k; ++c)
                        flat[map_.msg_col(s, c)] =
                            msgs[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
                column.resize(static_cast<std::size_t>(stripes));
                for (int s = 0; s < stripes; ++s) {
                    if (v < cfg_.k) {
                        column[static_cast<std::size_t>(s)] = flat[map_.msg_col(s, v)];
                    } else {
                        gf::Elem acc = 0;
                        const auto row = map_.row(v, s);
                        for (std::size_t i = 0; i < row.size(); ++i) {
                            if (row[i] == 0)
                                continue;
                            acc ^= gf::mul(row[i], flat[i]);
                            ++rep.mul_ops;
                            ++rep.add_ops;
                        }
                        column[static_cast<std::size_t>(s)] = acc;
                    }
                }
            }
            for (int s = 0; s < stripes; ++s)
                rebuilt[static_cast<std::size_t>(g) * static_cast<std::size_t>(stripes) +
                        static_cast<std::size_t>(s)] = column[static_cast<std::size_t>(s)];
        }
        stores_[static_cast<std::size_t>(v)] = std::move(rebuilt);
        if (root_)
            flush_node(v);
        rep.block_groups = lanes_;
        rep.symbols = ledger_.total();
        return rep;
    }

    /// Snapshot of one node's raw cell bytes (for bit-exactness checks).
    const std::vector<std::uint8_t>& node_cells(int v) const {
        const auto& s = stores_[check_node(v)];
        if (!s)
            throw DataError("node " + std::to_string(v) + " is failed");
        return *s;
    }

private:
    explicit Cluster(ClusterConfig cfg) : cfg_(std::move(cfg)) {
        stores_.resize(static_cast<std::size_t>(cfg_.n));
        for (auto& s : stores_)
            s.emplace();
        code_ = make_code(cfg_.n, cfg_.k);
        const int stripes = cfg_.stripes();
        std::vector<gf::Vec> zeros(static_cast<std::size_t>(stripes),
                                   gf::Vec(static_cast<std::size_t>(cfg_.k), 0));
        switch (cfg_.scheme) {
        case Scheme::mds:
            map_ = ArrayBuilder(code_, zeros).map();
            break;
        case Scheme::rsr2:
            rsr2_ = build_rsr2(cfg_.n, cfg_.k);
            map_ = encode_rsr2(*rsr2_, zeros).map;
            break;
        case Scheme::gen:
            gen_ = make_gen_params(cfg_.n, cfg_.k, cfg_.s, cfg_.p);
            asg_ = build_assignment(*gen_);
            map_ = encode_gen(*gen_, *asg_, zeros).map;
            break;
        }
    }

    std::size_t check_node(int v) const {
        if (v < 0 || v >= cfg_.n)
            throw ParamError("node index out of range");
        return static_cast<std::size_t>(v);
    }

    gf::Elem cell_at(int node, std::uint64_t group, int stripe) const {
        const auto& cells = *stores_[static_cast<std::size_t>(node)];
        return cells[static_cast<std::size_t>(group) * static_cast<std::size_t>(cfg_.stripes()) +
                     static_cast<std::size_t>(stripe)];
    }

    std::filesystem::path node_dir(int v) const {
        char name[16];
        std::snprintf(name, sizeof name, "node_%03d", v);
        return *root_ / name;
    }

    std::optional<std::vector<std::uint8_t>> read_store_file(int v) const {
        std::ifstream in(node_dir(v) / "store.pbec", std::ios::binary);
        if (!in)
            return std::nullopt;
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        if (bytes.size() < detail::kHeaderBytes)
            return std::nullopt;
        const auto expect = store_header(cfg_);
        if (!std::equal(expect.begin(), expect.end(), bytes.begin()))
            return std::nullopt;
        const std::size_t want =
            lanes_ * static_cast<std::size_t>(cfg_.stripes());
        if (bytes.size() - detail::kHeaderBytes != want)
            return std::nullopt;
        return std::vector<std::uint8_t>(bytes.begin() + detail::kHeaderBytes, bytes.end());
    }

    void flush_node(int v) {
        const auto& store = stores_[static_cast<std::size_t>(v)];
        if (!store)
            return;
        std::error_code ec;
        std::filesystem::create_directories(node_dir(v), ec);
        if (ec)
            throw IoError("cannot create store directory for node " + std::to_string(v));
        std::ofstream out(node_dir(v) / "store.pbec", std::ios::binary | std::ios::trunc);
        const auto header = store_header(cfg_);
        out.write(reinterpret_cast<const char*>(header.data()),
                  static_cast<std::streamsize>(header.size()));
        out.write(reinterpret_cast<const char*>(store->data()),
                  static_cast<std::streamsize>(store->size()));
        if (!out)
            throw IoError("write failure on node " + std::to_string(v));
    }

    void flush_all() {
        if (!root_)
            return;
        for (int v = 0; v < cfg_.n; ++v)
            flush_node(v);
        std::ofstream out(*root_ / "manifest.txt", std::ios::binary | std::ios::trunc);
        const std::string text = manifest().serialize();
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out)
            throw IoError("cannot write manifest");
    }

    ClusterConfig cfg_;
    std::optional<std::filesystem::path> root_;
    std::uint64_t lanes_ = 0;
    std::uint64_t payload_len_ = 0;
    std::uint32_t checksum_ = 0;
    std::vector<std::optional<std::vector<std::uint8_t>>> stores_;
    CodeParams code_;
    LinearCellMap map_;
    std::optional<Rsr2Code> rsr2_;
    std::optional<GenParams> gen_;
    std::optional<PiggybackAssignment> asg_;
    BandwidthLedger ledger_;
};

struct FormulaCheck {
    ClusterConfig cfg;
    std::uint64_t measured_symbols = 0;
    Rational measured;
    Rational analytic;
    bool match = false;
};

/// Measures the average systematic repair bandwidth of each configuration
/// on a one-block-group cluster and compares it, as an exact rational,
/// against the closed-form ratio.
inline std::vector<FormulaCheck> validate_formulas(std::span<const ClusterConfig> grid,
                                                   std::uint32_t seed = 0x5eed) {
    std::vector<FormulaCheck> out;
    std::uint32_t state = seed;
    const auto next_byte = [&state] {
        state = state * 1664525u + 1013904223u;
        return static_cast<std::uint8_t>(state >> 24);
    };
    for (const auto& cfg : grid) {
        FormulaCheck chk;
        chk.cfg = cfg;
        Cluster cluster = Cluster::create(cfg);
        std::vector<std::uint8_t> payload(static_cast<std::size_t>(cfg.lane_bytes()));
        for (auto& b : payload)
            b = next_byte();
        cluster.ingest(payload);
        for (int l = 0; l < cfg.k; ++l) {
            cluster.fail_node(l);
            chk.measured_symbols += cluster.repair(l).symbols;
        }
        chk.measured = Rational(static_cast<long long>(chk.measured_symbols),
                                static_cast<long long>(cfg.k) * cfg.k * cfg.stripes());
        switch (cfg.scheme) {
        case Scheme::mds:
            chk.analytic = Rational(1);
            break;
        case Scheme::rsr2:
            chk.analytic = analysis::gamma1(cfg.n, cfg.k);
            break;
        case Scheme::gen:
            chk.analytic = analysis::gamma2(cfg.n, cfg.k, cfg.s, cfg.p);
            break;
        }
        chk.match = chk.measured == chk.analytic;
        out.push_back(std::move(chk));
    }
    return out;
}

} // namespace pbec::sim
