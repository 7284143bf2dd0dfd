/**************************************************************************
 * pbec.cpp
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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pbec/pbec.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParam = 2;
constexpr int kExitUnrecoverable = 3;
constexpr int kExitIo = 4;

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw pbec::IoError("cannot read input file " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

pbec::sim::ClusterConfig make_config(const std::string& scheme, int n, int k, int s, int p) {
    pbec::sim::ClusterConfig cfg;
    cfg.scheme = pbec::sim::parse_scheme(scheme);
    cfg.n = n;
    cfg.k = k;
    cfg.s = s;
    cfg.p = p;
    cfg.validate();
    return cfg;
}

int cmd_encode(const std::string& scheme, int n, int k, int s, int p,
               const std::string& cluster_dir, const std::string& input) {
    const auto cfg = make_config(scheme, n, k, s, p);
    auto cluster = pbec::sim::Cluster::create(cfg, cluster_dir);
    const auto payload = read_file(input);
    const auto manifest = cluster.ingest(payload);
    std::cout << "encoded " << manifest.payload_length << " bytes into " << manifest.lane_count
              << " block groups (" << scheme << " n=" << n << " k=" << k;
    if (cfg.scheme == pbec::sim::Scheme::gen)
        std::cout << " s=" << s << " p=" << p;
    std::cout << ") at " << cluster_dir << "\n";
    return kExitOk;
}

int cmd_repair(const std::string& cluster_dir, int node, bool force) {
    auto cluster = pbec::sim::Cluster::open(cluster_dir);
    if (!cluster.node_failed(node) && !force) {
        std::cout << "nothing to repair\n";
        return kExitOk;
    }
    if (!cluster.node_failed(node))
        cluster.fail_node(node);
    const auto rep = cluster.repair(node);
    std::cout << "node " << node << " rebuilt\n";
    std::cout << "downloaded: " << rep.symbols << " symbols\n";
    std::cout << "multiplications: " << rep.mul_ops << "\n";
    std::cout << "additions: " << rep.add_ops << "\n";
    std::cout << "block groups: " << rep.block_groups << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& cluster_dir) {
    auto cluster = pbec::sim::Cluster::open(cluster_dir);
    int failed = 0;
    for (int v = 0; v < cluster.config().n; ++v)
        if (cluster.node_failed(v))
            ++failed;
    if (!cluster.verify())
        throw pbec::DataError("checksum mismatch: payload corrupt");
    char sum[16];
    std::snprintf(sum, sizeof sum, "%08x", cluster.payload_checksum());
    std::cout << "payload OK (" << cluster.payload_length() << " bytes, crc " << sum << ")\n";
    if (failed > 0)
        std::cout << "warning: " << failed << " failed node(s), data still recoverable\n";
    return kExitOk;
}

int cmd_analyze(int n, int k, int s, int p, int max_stripes, const std::string& format,
                bool sweep, int samples) {
    if (sweep) {
        pbec::analysis::emit_bound_curves(n, k, samples, std::cout);
        return kExitOk;
    }
    if ((s == 0) != (p == 0))
        throw pbec::ParamError("provide both --s and --p, or neither");
    if (s != 0)
        pbec::analysis::check_gen_params(n, k, s, p);
    pbec::analysis::TableConfig cfg{n, k, s, p, max_stripes};
    if (format == "csv") {
        pbec::analysis::emit_tables({&cfg, 1}, std::cout);
        return kExitOk;
    }
    const int r = n - k;
    std::cout << "code (" << n << "," << k << "): r=" << r << "\n";
    if (r >= 3)
        std::cout << "rsr2: stripes=" << (2 * r - 3) << " gamma1="
                  << pbec::analysis::gamma1(n, k).fixed(4) << "\n";
    else
        std::cout << "rsr2: not constructible (needs r >= 3)\n";
    int use_s = s, use_p = p;
    if (s == 0) {
        const auto opt = pbec::analysis::optimize_sp(n, k, max_stripes);
        use_s = opt.s;
        use_p = opt.p;
        std::cout << "optimizer: s=" << opt.s << " p=" << opt.p << " gamma2="
                  << opt.gamma.fixed(4) << " (stripes <= " << max_stripes << ")\n";
    }
    const auto bounds = pbec::analysis::gamma2_bounds(n, k, use_s, use_p);
    std::cout << "gen: s=" << use_s << " p=" << use_p << " stripes=" << (use_s + use_p)
              << " gamma2=" << pbec::analysis::gamma2(n, k, use_s, use_p).fixed(4) << "\n";
    std::cout << "bounds: gamma_low=" << bounds.low.fixed(4) << " gamma_up=" << bounds.up.fixed(4)
              << "\n";
    std::cout << "msr baseline: gamma_msr=" << pbec::analysis::gamma_msr(n, k).fixed(4) << "\n";
    return kExitOk;
}

int cmd_sweep(int n, int k, int samples, bool min_curves, int r_lo, int r_hi) {
    if (min_curves) {
        pbec::analysis::emit_min_curves(r_lo, r_hi, std::cout);
        return kExitOk;
    }
    pbec::analysis::emit_bound_curves(n, k, samples, std::cout);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"piggybacking erasure-code toolkit"};
    app.require_subcommand(1);

    std::string scheme = "gen";
    int n = 0, k = 0, s = 0, p = 0;
    std::string cluster_dir, input;
    int node = -1;
    bool force = false;
    int max_stripes = 32;
    std::string format = "plain";
    bool sweep_flag = false;
    bool min_curves = false;
    int samples = 199;
    int r_lo = 3, r_hi = 50;

    auto* enc = app.add_subcommand("encode", "encode a file into a cluster");
    enc->add_option("--scheme", scheme, "mds, rsr2 or gen")->default_val("gen");
    enc->add_option("--n", n, "total node count")->required();
    enc->add_option("--k", k, "systematic node count")->required();
    enc->add_option("--s", s, "protected stripe count (gen)");
    enc->add_option("--p", p, "piggybacked stripe count (gen)");
    enc->add_option("--cluster", cluster_dir, "cluster root directory")->required();
    enc->add_option("--input", input, "payload file")->required();

    auto* rep = app.add_subcommand("repair", "rebuild one node of a cluster");
    rep->add_option("--cluster", cluster_dir, "cluster root directory")->required();
    rep->add_option("--node", node, "node index")->required();
    rep->add_flag("--force", force, "re-derive the node even if healthy");

    auto* ver = app.add_subcommand("verify", "check payload integrity of a cluster");
    ver->add_option("--cluster", cluster_dir, "cluster root directory")->required();

    auto* ana = app.add_subcommand("analyze", "repair-ratio table for one code");
    ana->add_option("--n", n, "total node count")->required();
    ana->add_option("--k", k, "systematic node count")->required();
    ana->add_option("--s", s, "protected stripe count (omit to optimize)");
    ana->add_option("--p", p, "piggybacked stripe count (omit to optimize)");
    ana->add_option("--max-stripes", max_stripes, "optimizer stripe budget")->default_val(32);
    ana->add_option("--format", format, "plain or csv")
        ->check(CLI::IsMember({"plain", "csv"}))
        ->default_val("plain");
    ana->add_flag("--sweep", sweep_flag, "emit bound curves over the protected proportion");
    ana->add_option("--samples", samples, "curve sample count")->default_val(199);

    auto* swp = app.add_subcommand("sweep", "bound curves for plotting");
    swp->add_option("--n", n, "total node count");
    swp->add_option("--k", k, "systematic node count");
    swp->add_option("--samples", samples, "curve sample count")->default_val(199);
    swp->add_flag("--min-curves", min_curves, "emit minima as functions of r (rate 1/2)");
    swp->add_option("--r-min", r_lo, "first r for --min-curves")->default_val(3);
    swp->add_option("--r-max", r_hi, "last r for --min-curves")->default_val(50);

    try {
        app.parse(argc, argv);
        if (enc->parsed())
            return cmd_encode(scheme, n, k, s, p, cluster_dir, input);
        if (rep->parsed())
            return cmd_repair(cluster_dir, node, force);
        if (ver->parsed())
            return cmd_verify(cluster_dir);
        if (ana->parsed())
            return cmd_analyze(n, k, s, p, max_stripes, format, sweep_flag, samples);
        if (swp->parsed()) {
            if (!min_curves && (n == 0 || k == 0))
                throw pbec::ParamError("sweep needs --n and --k (or --min-curves)");
            return cmd_sweep(n, k, samples, min_curves, r_lo, r_hi);
        }
        throw pbec::ParamError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitParam;
    } catch (const pbec::ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParam;
    } catch (const pbec::UnrecoverableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnrecoverable;
    } catch (const pbec::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnrecoverable;
    } catch (const pbec::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
