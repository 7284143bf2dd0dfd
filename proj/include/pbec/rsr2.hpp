/**************************************************************************
 * rsr2.hpp
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

namespace pbec {

/// Partition of the k systematic nodes into r-1 contiguous sets, sizes as
/// even as possible: the first `t` sets hold `t_h` nodes, the rest `t_l`.
struct NodeSets {
    int t_l = 0, t_h = 0, t = 0;
    std::vector<int> set_of;                // node -> set index
    std::vector<std::vector<int>> members;  // set index -> nodes, ascending

    int size_of_set(int set) const { return static_cast<int>(members[static_cast<std::size_t>(set)].size()); }
};

inline NodeSets split_node_sets(int k, int r) {
    NodeSets ns;
    ns.t_l = k / (r - 1);
    ns.t_h = (k + r - 2) / (r - 1);
    ns.t = k - (r - 1) * ns.t_l;
    ns.set_of.resize(static_cast<std::size_t>(k));
    ns.members.resize(static_cast<std::size_t>(r - 1));
    int node = 0;
    for (int s = 0; s < r - 1; ++s) {
        const int size = s < ns.t ? ns.t_h : ns.t_l;
        for (int i = 0; i < size; ++i, ++node) {
            ns.set_of[static_cast<std::size_t>(node)] = s;
            ns.members[static_cast<std::size_t>(s)].push_back(node);
        }
    }
    return ns;
}

/// RSR-II piggybacking code: 2r-3 stripes over a systematic MDS base code.
/// The first r-1 stripes are protected (their systematic symbols ride in
/// piggyback functions), the last r-2 repair by plain MDS decoding.
///
/// Selection vectors q(i,j) restrict parity row i to node set j, so that
/// summing q(i,j) over j gives back the full parity row.
struct Rsr2Code {
    CodeParams code;
    NodeSets sets;
    int alpha = 0; // 2r-3

    int r() const { return code.r(); }
    int k() const { return code.k; }

    /// Evaluation point for parity index i in 2..r: the field element with
    /// binary value i. Distinct and nonzero for all admissible r.
    gf::Elem eval_point(int i) const { return static_cast<gf::Elem>(i); }

    /// q(i,j) for i in 2..r, j in 1..r-1: parity row i masked to set j.
    gf::Vec selection(int i, int j) const {
        gf::Vec q(static_cast<std::size_t>(code.k), 0);
        const auto& row = code.parity_rows[static_cast<std::size_t>(i - 1)];
        for (int c : sets.members[static_cast<std::size_t>(j - 1)])
            q[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c)];
        return q;
    }

    /// Set indices 1..r-1 excluding i-1, ascending: the slot order in which
    /// the v_i piggybacks occupy stripes r..2r-3 of node k+i.
    std::vector<int> slot_sets(int i) const {
        std::vector<int> js;
        for (int j = 1; j <= r() - 1; ++j)
            if (j != i - 1)
                js.push_back(j);
        return js;
    }
};

/// Coefficient matrix of the final repair step for one failed node: one row
/// per parity node k+i, scaled Vandermonde in the evaluation points except
/// for the row whose piggyback already isolates the last protected stripe.
/// Invertible because parity entries are nonzero and eval points distinct.
inline gf::Matrix protected_system(const Rsr2Code& rc, int failed) {
    const int r = rc.r();
    const int j1 = rc.sets.set_of[static_cast<std::size_t>(failed)] + 1;
    gf::Matrix a(static_cast<std::size_t>(r - 1), static_cast<std::size_t>(r - 1));
    for (int i = 2; i <= r; ++i) {
        const gf::Elem pl =
            rc.code.parity_rows[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(failed)];
        if (i - 1 == j1) {
            a(static_cast<std::size_t>(i - 2), static_cast<std::size_t>(r - 2)) = pl;
        } else {
            for (int m = 1; m <= r - 1; ++m)
                a(static_cast<std::size_t>(i - 2), static_cast<std::size_t>(m - 1)) =
                    gf::mul(pl, gf::pow_u(rc.eval_point(i), static_cast<unsigned>(r - 1 - m)));
        }
    }
    return a;
}

inline Rsr2Code build_rsr2(int n, int k) {
    if (n - k < 3)
        throw ParamError("RSR-II requires at least 3 parities");
    Rsr2Code rc;
    rc.code = make_code(n, k);
    rc.sets = split_node_sets(k, rc.code.r());
    rc.alpha = 2 * rc.code.r() - 3;
    // guard: the repair systems must be solvable for every node
    if (n <= 12)
        for (int l = 0; l < k; ++l)
            if (!gf::invertible(protected_system(rc, l)))
                throw InternalError("repair system singular for node " + std::to_string(l));
    return rc;
}

/// Coefficients (over the flattened message) of q(i,j)^T v_i, where
/// v_i = sum over protected stripes m of eval(i)^(r-1-m) * a_m. With
/// `hat`, the last protected stripe is dropped (the v-hat variant).
inline gf::Vec piggyback_coeffs(const Rsr2Code& rc, int i, int j, bool hat = false) {
    const int r = rc.r(), k = rc.k();
    gf::Vec coeffs(static_cast<std::size_t>(k) * static_cast<std::size_t>(rc.alpha), 0);
    const gf::Vec q = rc.selection(i, j);
    const int last = hat ? r - 2 : r - 1;
    for (int m = 1; m <= last; ++m) {
        const gf::Elem w = gf::pow_u(rc.eval_point(i), static_cast<unsigned>(r - 1 - m));
        for (int c = 0; c < k; ++c) {
            const gf::Elem qc = q[static_cast<std::size_t>(c)];
            if (qc != 0)
                coeffs[static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(k) +
                       static_cast<std::size_t>(c)] = gf::mul(qc, w);
        }
    }
    return coeffs;
}

/// Encodes 2r-3 messages into the stored layout: node k+1 keeps plain
/// parities everywhere; node k+i (i >= 2) carries its v_i piggybacks on
/// stripes r..2r-3 and, on stripe r-1, the transformed cell
/// q(i,i-1)^T a_{r-1} + sum of its own plain parities of stripes r..2r-3.
inline EncodedArray encode_rsr2(const Rsr2Code& rc, const std::vector<gf::Vec>& messages) {
    const int r = rc.r(), k = rc.k();
    if (static_cast<int>(messages.size()) != rc.alpha)
        throw ParamError("encode_rsr2: expected 2r-3 stripes of messages");
    ArrayBuilder b(rc.code, messages);
    const std::size_t flat_len =
        static_cast<std::size_t>(k) * static_cast<std::size_t>(rc.alpha);
    for (int i = 2; i <= r; ++i) {
        const int node = k + i - 1;
        const auto slots = rc.slot_sets(i);
        for (std::size_t idx = 0; idx < slots.size(); ++idx)
            b.attach_piggyback(node, (r - 1) + static_cast<int>(idx),
                               piggyback_coeffs(rc, i, slots[idx]));
        // within-row transform of stripe r-1: replace the plain parity by
        // q(i,i-1)^T a_{r-1} and fold in the plain parities of the later stripes
        gf::Vec delta(flat_len, 0);
        const gf::Vec q = rc.selection(i, i - 1);
        const auto& p = rc.code.parity_rows[static_cast<std::size_t>(i - 1)];
        for (int c = 0; c < k; ++c)
            delta[static_cast<std::size_t>(r - 2) * static_cast<std::size_t>(k) +
                  static_cast<std::size_t>(c)] =
                gf::add(q[static_cast<std::size_t>(c)], p[static_cast<std::size_t>(c)]);
        for (int s = r - 1; s < rc.alpha; ++s)
            for (int c = 0; c < k; ++c)
                delta[static_cast<std::size_t>(s) * static_cast<std::size_t>(k) +
                      static_cast<std::size_t>(c)] = p[static_cast<std::size_t>(c)];
        b.attach_piggyback(node, r - 2, delta, /*within_row_transform=*/true);
    }
    return std::move(b).finish();
}

/// Repairs systematic node `failed`, reading surviving cells through
/// `reader(node, stripe)`. Downloads (r-2)k + (r-1)|S| symbols where S is
/// the failed node's set:
///   1. MDS-decode the r-2 non-protected symbols (k cells per stripe);
///   2. fetch, per parity node k+i, the one cell whose piggyback selects S,
///      and strip the known non-protected parts (r-1 cells);
///   3. fetch the protected symbols of the other |S|-1 nodes in S, strip
///      them too, and solve the remaining (r-1)x(r-1) system, whose rows
///      are scaled Vandermonde rows in the evaluation points.
template <typename Reader>
std::pair<gf::Vec, RepairReport> repair_systematic_rsr2(const Rsr2Code& rc, int failed,
                                                        Reader&& reader) {
    const int r = rc.r(), k = rc.k();
    if (failed < 0 || failed >= k)
        throw ParamError("repair_systematic_rsr2: node must be systematic");
    RepairReport rep;
    gf::OpCounter ops;
    const auto fetch = [&](int v, int s) {
        rep.downloaded.emplace_back(v, s);
        return reader(v, s);
    };

    gf::Vec column(static_cast<std::size_t>(rc.alpha), 0);

    // step 1: non-protected stripes via plain MDS repair
    std::vector<gf::Vec> np_full(static_cast<std::size_t>(rc.alpha));
    for (int s = r - 1; s < rc.alpha; ++s) {
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
        const gf::Elem got = repair_symbol(rc.code, failed, survivors, parity, &ops);
        msg[static_cast<std::size_t>(failed)] = got;
        column[static_cast<std::size_t>(s)] = got;
        np_full[static_cast<std::size_t>(s)] = std::move(msg);
    }

    // step 2: one carrier cell per parity node k+i, reduced to its
    // piggyback-on-S part
    const int jset = rc.sets.set_of[static_cast<std::size_t>(failed)];
    const int j1 = jset + 1;
    gf::Vec w(static_cast<std::size_t>(r - 1), 0);
    for (int i = 2; i <= r; ++i) {
        const int node = k + i - 1;
        const auto& p = rc.code.parity_rows[static_cast<std::size_t>(i - 1)];
        gf::Elem acc;
        if (i - 1 == j1) {
            acc = fetch(node, r - 2);
            for (int s = r - 1; s < rc.alpha; ++s)
                for (int c = 0; c < k; ++c)
                    acc = gf::add(acc,
                                  gf::mul(p[static_cast<std::size_t>(c)],
                                          np_full[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)],
                                          ops),
                                  ops);
        } else {
            const auto slots = rc.slot_sets(i);
            int idx = 0;
            while (slots[static_cast<std::size_t>(idx)] != j1)
                ++idx;
            const int s = (r - 1) + idx;
            acc = fetch(node, s);
            for (int c = 0; c < k; ++c)
                acc = gf::add(acc,
                              gf::mul(p[static_cast<std::size_t>(c)],
                                      np_full[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)],
                                      ops),
                              ops);
        }
        w[static_cast<std::size_t>(i - 2)] = acc;
    }

    // step 3: strip surviving protected symbols of S, then solve for the
    // r-1 missing protected symbols
    const auto& set_nodes = rc.sets.members[static_cast<std::size_t>(jset)];
    std::vector<gf::Vec> surv(static_cast<std::size_t>(k));
    for (int c : set_nodes) {
        if (c == failed)
            continue;
        gf::Vec col_c(static_cast<std::size_t>(r - 1));
        for (int m = 1; m <= r - 1; ++m)
            col_c[static_cast<std::size_t>(m - 1)] = fetch(c, m - 1);
        surv[static_cast<std::size_t>(c)] = std::move(col_c);
    }
    for (int i = 2; i <= r; ++i) {
        const auto& p = rc.code.parity_rows[static_cast<std::size_t>(i - 1)];
        gf::Elem& acc = w[static_cast<std::size_t>(i - 2)];
        for (int c : set_nodes) {
            if (c == failed)
                continue;
            const auto& col_c = surv[static_cast<std::size_t>(c)];
            if (i - 1 == j1) {
                acc = gf::add(acc,
                              gf::mul(p[static_cast<std::size_t>(c)],
                                      col_c[static_cast<std::size_t>(r - 2)], ops),
                              ops);
            } else {
                gf::Elem vic = 0;
                for (int m = 1; m <= r - 1; ++m)
                    vic = gf::add(vic,
                                  gf::mul(gf::pow_u(rc.eval_point(i), static_cast<unsigned>(r - 1 - m)),
                                          col_c[static_cast<std::size_t>(m - 1)], ops),
                                  ops);
                acc = gf::add(acc, gf::mul(p[static_cast<std::size_t>(c)], vic, ops), ops);
            }
        }
    }
    gf::Vec x;
    try {
        x = gf::solve_linear(protected_system(rc, failed), w, &ops);
    } catch (const SingularSystem& e) {
        throw InternalError("protected-symbol system singular (rank " +
                            std::to_string(e.rank()) + ")");
    }
    for (int m = 0; m < r - 1; ++m)
        column[static_cast<std::size_t>(m)] = x[static_cast<std::size_t>(m)];

    rep.mul_ops = ops.mul;
    rep.add_ops = ops.add;
    return {std::move(column), std::move(rep)};
}

inline std::pair<gf::Vec, RepairReport> repair_systematic_rsr2(const Rsr2Code& rc,
                                                               const EncodedArray& enc,
                                                               int failed) {
    return repair_systematic_rsr2(rc, failed, [&](int v, int s) {
        if (v == failed)
            throw InternalError("repair touched the failed node");
        return enc.array.at(v, s);
    });
}

} // namespace pbec
