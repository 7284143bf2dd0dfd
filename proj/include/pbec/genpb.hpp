/**************************************************************************
 * genpb.hpp
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

#include <utility>
#include <vector>

#include "framework.hpp"
#include "rational.hpp"

namespace pbec {

/// Generalized piggybacking code: s protected stripes followed by p
/// piggybacked stripes. The array splits into four regions:
///   A: systematic cells of protected stripes (covered by the functions)
///   B: systematic cells plus first parity row of piggybacked stripes
///   C: parity cells of protected stripes (left plain)
///   D: last r-1 parity rows of piggybacked stripes (function carriers)
struct GenParams {
    CodeParams code;
    int s = 0; // protected stripes
    int p = 0; // piggybacked stripes

    int stripes() const { return s + p; }
    int func_count() const { return (code.r() - 1) * p; }
};

inline GenParams make_gen_params(int n, int k, int s, int p) {
    GenParams gp;
    gp.code = make_code(n, k);
    gp.s = s;
    gp.p = p;
    if (s < 1 || p < 1)
        throw ParamError("generalized code needs s >= 1 protected and p >= 1 piggybacked stripes");
    if ((gp.code.r() - 1) * p < s)
        throw ParamError("insufficient Region D capacity: (r-1)*p >= s is required (r=" +
                         std::to_string(gp.code.r()) + ", s=" + std::to_string(s) +
                         ", p=" + std::to_string(p) + ")");
    return gp;
}

/// Which Region-A cells feed which piggyback function, and where each
/// function lands in Region D.
///
/// Region A is read row-wise (node-major) into a
/// ceil(ks/((r-1)p)) x (r-1)p scratch array; column f of that array is
/// function f. The s functions covering one node therefore have
/// consecutive indices modulo (r-1)p and are always pairwise distinct.
struct PiggybackAssignment {
    std::vector<int> sizes;                                 // per function
    std::vector<std::vector<std::pair<int, int>>> members;  // function -> (node, stripe)
    std::vector<std::pair<int, int>> placement;             // function -> (node, stripe)

    int func_of(int node, int stripe, int s) const {
        return (node * s + stripe) % static_cast<int>(sizes.size());
    }
};

inline PiggybackAssignment build_assignment(const GenParams& gp) {
    const int k = gp.code.k, m = gp.func_count();
    PiggybackAssignment asg;
    asg.sizes.assign(static_cast<std::size_t>(m), 0);
    asg.members.resize(static_cast<std::size_t>(m));
    for (int node = 0; node < k; ++node)
        for (int stripe = 0; stripe < gp.s; ++stripe) {
            const int f = (node * gp.s + stripe) % m;
            ++asg.sizes[static_cast<std::size_t>(f)];
            asg.members[static_cast<std::size_t>(f)].emplace_back(node, stripe);
        }
    asg.placement.resize(static_cast<std::size_t>(m));
    for (int f = 0; f < m; ++f)
        asg.placement[static_cast<std::size_t>(f)] = {k + 1 + f / gp.p, gp.s + f % gp.p};
    // guard: the s functions covering any one node must be distinct so its
    // missing protected symbols stay independently recoverable
    for (int node = 0; node < k; ++node) {
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        for (int stripe = 0; stripe < gp.s; ++stripe) {
            const int f = (node * gp.s + stripe) % m;
            if (seen[static_cast<std::size_t>(f)])
                throw InternalError("piggyback function covers one node twice");
            seen[static_cast<std::size_t>(f)] = true;
        }
    }
    return asg;
}

/// Encodes s+p messages; each Region-D cell carries its plain parity plus
/// the sum of its function's Region-A cells.
inline EncodedArray encode_gen(const GenParams& gp, const PiggybackAssignment& asg,
                               const std::vector<gf::Vec>& messages) {
    if (static_cast<int>(messages.size()) != gp.stripes())
        throw ParamError("encode_gen: expected s+p stripes of messages");
    ArrayBuilder b(gp.code, messages);
    const std::size_t flat_len =
        static_cast<std::size_t>(gp.code.k) * static_cast<std::size_t>(gp.stripes());
    for (std::size_t f = 0; f < asg.members.size(); ++f) {
        gf::Vec coeffs(flat_len, 0);
        for (const auto& [node, stripe] : asg.members[f])
            coeffs[static_cast<std::size_t>(stripe) * static_cast<std::size_t>(gp.code.k) +
                   static_cast<std::size_t>(node)] = 1;
        const auto [pn, ps] = asg.placement[f];
        b.attach_piggyback(pn, ps, coeffs);
    }
    return std::move(b).finish();
}

/// Repairs systematic node `failed`:
///   - each piggybacked-stripe symbol by plain MDS repair over Region B
///     (k downloads per stripe);
///   - each protected-stripe symbol from its function's Region-D carrier:
///     download the carrier, cancel its plain parity (computable from the
///     already-recovered piggybacked message), download and cancel the
///     function's other Region-A members.
/// Total download: kp + s + sum over covering functions of (size - 1).
template <typename Reader>
std::pair<gf::Vec, RepairReport> repair_systematic_gen(const GenParams& gp,
                                                       const PiggybackAssignment& asg,
                                                       int failed, Reader&& reader) {
    const int k = gp.code.k;
    if (failed < 0 || failed >= k)
        throw ParamError("repair_systematic_gen: node must be systematic");
    RepairReport rep;
    gf::OpCounter ops;
    const auto fetch = [&](int v, int s) {
        rep.downloaded.emplace_back(v, s);
        return reader(v, s);
    };

    gf::Vec column(static_cast<std::size_t>(gp.stripes()), 0);

    std::vector<gf::Vec> pb_full(static_cast<std::size_t>(gp.p));
    for (int i = 0; i < gp.p; ++i) {
        const int s = gp.s + i;
        gf::Vec msg(static_cast<std::size_t>(k), 0);
        gf::Vec survivors;
        survivors.reserve(static_cast<std::size_t>(k - 1));
        for (int c = 0; c < k; ++c) {
            if (c == failed)
                continue;
            msg[static_cast<std::size_t>(c)] = fetch(c, s);
            survivors.push_back(msg[static_cast<std::size_t>(c)]);
        }
        const gf::Elem parity = fetch(k, s);
        const gf::Elem got = repair_symbol(gp.code, failed, survivors, parity, &ops);
        msg[static_cast<std::size_t>(failed)] = got;
        column[static_cast<std::size_t>(s)] = got;
        pb_full[static_cast<std::size_t>(i)] = std::move(msg);
    }

    for (int stripe = 0; stripe < gp.s; ++stripe) {
        const int f = asg.func_of(failed, stripe, gp.s);
        const auto [pn, ps] = asg.placement[static_cast<std::size_t>(f)];
        gf::Elem acc = fetch(pn, ps);
        // cancel the carrier's plain parity: k multiplications, k-1 additions
        const auto& prow = gp.code.parity_rows[static_cast<std::size_t>(pn - k)];
        const auto& msg = pb_full[static_cast<std::size_t>(ps - gp.s)];
        gf::Elem parity = gf::mul(prow[0], msg[0], ops);
        for (int c = 1; c < k; ++c)
            parity = gf::add(parity, gf::mul(prow[static_cast<std::size_t>(c)],
                                             msg[static_cast<std::size_t>(c)], ops),
                             ops);
        acc = gf::add(acc, parity, ops);
        for (const auto& [node2, stripe2] : asg.members[static_cast<std::size_t>(f)]) {
            if (node2 == failed) {
                if (stripe2 != stripe)
                    throw InternalError("piggyback function covers one node twice");
                continue;
            }
            acc = gf::add(acc, fetch(node2, stripe2), ops);
        }
        column[static_cast<std::size_t>(stripe)] = acc;
    }

    rep.mul_ops = ops.mul;
    rep.add_ops = ops.add;
    return {std::move(column), std::move(rep)};
}

inline std::pair<gf::Vec, RepairReport> repair_systematic_gen(const GenParams& gp,
                                                              const PiggybackAssignment& asg,
                                                              const EncodedArray& enc,
                                                              int failed) {
    return repair_systematic_gen(gp, asg, failed, [&](int v, int s) {
        if (v == failed)
            throw InternalError("repair touched the failed node");
        return enc.array.at(v, s);
    });
}

/// Field-operation cost per recovered symbol, split by symbol class.
struct RepairOpProfile {
    std::uint64_t piggybacked_mul = 0; // per piggybacked-stripe symbol
    std::uint64_t piggybacked_add = 0;
    std::uint64_t protected_mul = 0;   // per protected-stripe symbol
    Rational protected_add;            // average over the stripe class
};

/// Exact per-node profile: recovering a piggybacked symbol costs (k, k-1);
/// a protected symbol costs k multiplications and k-1+size additions for
/// its covering function. Matches instrumented tallies repair-by-repair.
inline RepairOpProfile repair_op_profile(const GenParams& gp, const PiggybackAssignment& asg,
                                         int failed) {
    const int k = gp.code.k;
    if (failed < 0 || failed >= k)
        throw ParamError("repair_op_profile: node must be systematic");
    RepairOpProfile prof;
    prof.piggybacked_mul = static_cast<std::uint64_t>(k);
    prof.piggybacked_add = static_cast<std::uint64_t>(k - 1);
    prof.protected_mul = static_cast<std::uint64_t>(k);
    long long total_adds = 0;
    for (int stripe = 0; stripe < gp.s; ++stripe)
        total_adds += k - 1 + asg.sizes[static_cast<std::size_t>(asg.func_of(failed, stripe, gp.s))];
    prof.protected_add = Rational(total_adds, gp.s);
    return prof;
}

/// Closed-form profile averaged over all functions: protected additions
/// come to ks/((r-1)p) + k - 1. Equals the per-node profile whenever all
/// function sizes are equal.
inline RepairOpProfile repair_op_profile(int k, int r, int s, int p) {
    if (k < 1 || s < 1 || p < 1 || (r - 1) * p < s)
        throw ParamError("repair_op_profile: invalid parameters");
    RepairOpProfile prof;
    prof.piggybacked_mul = static_cast<std::uint64_t>(k);
    prof.piggybacked_add = static_cast<std::uint64_t>(k - 1);
    prof.protected_mul = static_cast<std::uint64_t>(k);
    prof.protected_add = Rational(static_cast<long long>(k) * s, static_cast<long long>(r - 1) * p) +
                         Rational(k - 1);
    return prof;
}

} // namespace pbec
