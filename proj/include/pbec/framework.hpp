/**************************************************************************
 * framework.hpp
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
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mds.hpp"

namespace pbec {

/// Ledger of one repair: every downloaded cell plus the field-operation
/// tallies. A cell never appears twice.
struct RepairReport {
    std::vector<std::pair<int, int>> downloaded; // (node, stripe)
    std::uint64_t mul_ops = 0;
    std::uint64_t add_ops = 0;

    std::size_t symbol_count() const { return downloaded.size(); }
};

/// Multi-stripe storage array: one row per node, one column per stripe.
/// Rows 0..k-1 always hold raw message symbols.
struct StripeArray {
    CodeParams code;
    int alpha = 0;       // stripe count
    gf::Matrix cells;    // n x alpha

    gf::Elem at(int node, int stripe) const {
        return cells(static_cast<std::size_t>(node), static_cast<std::size_t>(stripe));
    }
};

/// Expresses every stored cell as a linear functional of the flattened
/// message vector (length k*alpha, stripe-major). Emitted by every encoder
/// next to the array; the generic decoder and the parity-rebuild path both
/// work purely off these coefficients.
class LinearCellMap {
public:
    LinearCellMap() = default;
    LinearCellMap(int n, int k, int alpha)
        : n_(n), k_(k), alpha_(alpha),
          coeffs_(static_cast<std::size_t>(n) * static_cast<std::size_t>(alpha),
                  static_cast<std::size_t>(k) * static_cast<std::size_t>(alpha)) {}

    int n() const { return n_; }
    int k() const { return k_; }
    int alpha() const { return alpha_; }

    std::size_t cell_row(int node, int stripe) const {
        return static_cast<std::size_t>(node) * static_cast<std::size_t>(alpha_) +
               static_cast<std::size_t>(stripe);
    }
    std::size_t msg_col(int stripe, int pos) const {
        return static_cast<std::size_t>(stripe) * static_cast<std::size_t>(k_) +
               static_cast<std::size_t>(pos);
    }

    std::span<gf::Elem> row(int node, int stripe) { return coeffs_.row(cell_row(node, stripe)); }
    std::span<const gf::Elem> row(int node, int stripe) const {
        return coeffs_.row(cell_row(node, stripe));
    }

    const gf::Matrix& coeffs() const { return coeffs_; }

    std::size_t rank() const { return gf::rank(coeffs_); }

private:
    int n_ = 0, k_ = 0, alpha_ = 0;
    gf::Matrix coeffs_;
};

struct EncodedArray {
    StripeArray array;
    LinearCellMap map;
};

/// Base-encodes alpha stripes and then lets piggyback functions be added
/// onto parity cells, keeping array values and cell map in sync.
class ArrayBuilder {
public:
    ArrayBuilder(CodeParams code, const std::vector<gf::Vec>& messages)
        : code_(std::move(code)), alpha_(static_cast<int>(messages.size())) {
        if (alpha_ < 1)
            throw ParamError("encode: need at least one stripe");
        map_ = LinearCellMap(code_.n, code_.k, alpha_);
        flat_.assign(static_cast<std::size_t>(code_.k) * static_cast<std::size_t>(alpha_), 0);
        cells_ = gf::Matrix(static_cast<std::size_t>(code_.n), static_cast<std::size_t>(alpha_));
        for (int s = 0; s < alpha_; ++s) {
            const auto& u = messages[static_cast<std::size_t>(s)];
            if (u.size() != static_cast<std::size_t>(code_.k))
                throw ParamError("encode: message length must equal k");
            for (int c = 0; c < code_.k; ++c)
                flat_[map_.msg_col(s, c)] = u[static_cast<std::size_t>(c)];
            const gf::Vec w = encode(code_, u);
            for (int v = 0; v < code_.n; ++v) {
                cells_(static_cast<std::size_t>(v), static_cast<std::size_t>(s)) =
                    w[static_cast<std::size_t>(v)];
                if (v < code_.k)
                    map_.row(v, s)[map_.msg_col(s, v)] = 1;
                else
                    for (int c = 0; c < code_.k; ++c)
                        map_.row(v, s)[map_.msg_col(s, c)] =
                            code_.parity_rows[static_cast<std::size_t>(v - code_.k)]
                                             [static_cast<std::size_t>(c)];
            }
        }
    }

    /// Adds dot(source_coeffs, flattened message) onto a parity cell.
    /// Coefficients may only touch stripes before the target stripe unless
    /// the caller vouches for an invertible within-row transform.
    void attach_piggyback(int node, int stripe, std::span<const gf::Elem> source_coeffs,
                          bool within_row_transform = false) {
        if (node < code_.k)
            throw ParamError("systematic cells immutable");
        if (node >= code_.n || stripe < 0 || stripe >= alpha_)
            throw ParamError("attach_piggyback: cell out of range");
        if (source_coeffs.size() != flat_.size())
            throw ParamError("attach_piggyback: coefficient length must be k*alpha");
        if (!within_row_transform) {
            const std::size_t first_same = map_.msg_col(stripe, 0);
            for (std::size_t i = first_same; i < source_coeffs.size(); ++i)
                if (source_coeffs[i] != 0)
                    throw ParamError("piggyback causality violation");
        }
        cells_(static_cast<std::size_t>(node), static_cast<std::size_t>(stripe)) ^=
            gf::dot(source_coeffs, flat_);
        auto row = map_.row(node, stripe);
        for (std::size_t i = 0; i < row.size(); ++i)
            row[i] ^= source_coeffs[i];
    }

    EncodedArray finish() && {
        return EncodedArray{StripeArray{std::move(code_), alpha_, std::move(cells_)},
                            std::move(map_)};
    }

    const gf::Matrix& cells() const { return cells_; }
    const LinearCellMap& map() const { return map_; }

private:
    CodeParams code_;
    int alpha_;
    gf::Matrix cells_;
    LinearCellMap map_;
    gf::Vec flat_;
};

namespace detail {

inline std::vector<int> checked_nodes(const LinearCellMap& map, std::span<const int> nodes) {
    std::vector<int> v(nodes.begin(), nodes.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() < static_cast<std::size_t>(map.k()))
        throw ParamError("decode: need at least k distinct nodes");
    if (!v.empty() && (v.front() < 0 || v.back() >= map.n()))
        throw ParamError("decode: node index out of range");
    return v;
}

} // namespace detail

/// Decodes all alpha messages by stacking the cell functionals of the
/// given nodes and solving for the flattened message. Works for any array
/// layout, transformed or not. `reader(node, stripe)` supplies cell values.
template <typename Reader>
std::vector<gf::Vec> decode_full(const LinearCellMap& map, std::span<const int> nodes,
                                 Reader&& reader) {
    const auto use = detail::checked_nodes(map, nodes);
    const std::size_t unknowns =
        static_cast<std::size_t>(map.k()) * static_cast<std::size_t>(map.alpha());
    gf::Matrix a(use.size() * static_cast<std::size_t>(map.alpha()), unknowns);
    gf::Vec y(a.rows());
    std::size_t row = 0;
    for (int v : use) {
        for (int s = 0; s < map.alpha(); ++s) {
            const auto src = map.row(v, s);
            std::copy(src.begin(), src.end(), a.row(row).begin());
            y[row] = reader(v, s);
            ++row;
        }
    }
    gf::Vec flat;
    try {
        flat = gf::solve_consistent(std::move(a), std::move(y));
    } catch (const SingularSystem& e) {
        throw InternalError("undecodable node set (rank " + std::to_string(e.rank()) + ")");
    }
    std::vector<gf::Vec> out(static_cast<std::size_t>(map.alpha()));
    for (int s = 0; s < map.alpha(); ++s) {
        out[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(map.k()));
        for (int c = 0; c < map.k(); ++c)
            out[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] =
                flat[map.msg_col(s, c)];
    }
    return out;
}

inline std::vector<gf::Vec> decode_full(const EncodedArray& enc, std::span<const int> nodes) {
    return decode_full(enc.map, nodes,
                       [&](int v, int s) { return enc.array.at(v, s); });
}

/// Stripe-by-stripe decoding: subtract the piggyback contributions of
/// already-decoded stripes from each cell, then run plain base-code
/// reconstruction on what is left. Only works when every piggyback rides
/// strictly later stripes (no within-row transforms).
template <typename Reader>
std::vector<gf::Vec> decode_recursive(const CodeParams& code, const LinearCellMap& map,
                                      std::span<const int> nodes, Reader&& reader) {
    const auto use = detail::checked_nodes(map, nodes);
    std::vector<gf::Vec> out(static_cast<std::size_t>(map.alpha()));
    gf::Vec flat(static_cast<std::size_t>(map.k()) * static_cast<std::size_t>(map.alpha()), 0);
    for (int s = 0; s < map.alpha(); ++s) {
        std::map<int, gf::Elem> stripe_syms;
        for (int v : use) {
            const auto row = map.row(v, s);
            // own-stripe block must still be the plain base functional
            for (int c = 0; c < map.k(); ++c) {
                const gf::Elem base =
                    v < map.k()
                        ? static_cast<gf::Elem>(c == v ? 1 : 0)
                        : code.parity_rows[static_cast<std::size_t>(v - map.k())]
                                          [static_cast<std::size_t>(c)];
                if (row[map.msg_col(s, c)] != base)
                    throw ParamError("array is not recursively decodable");
            }
            gf::Elem val = reader(v, s);
            for (int s2 = 0; s2 < map.alpha(); ++s2) {
                if (s2 == s)
                    continue;
                for (int c = 0; c < map.k(); ++c) {
                    const gf::Elem coef = row[map.msg_col(s2, c)];
                    if (coef == 0)
                        continue;
                    if (s2 > s)
                        throw ParamError("array is not recursively decodable");
                    val ^= gf::mul(coef, flat[map.msg_col(s2, c)]);
                }
            }
            stripe_syms[v] = val;
        }
        out[static_cast<std::size_t>(s)] = reconstruct(code, stripe_syms);
        for (int c = 0; c < map.k(); ++c)
            flat[map.msg_col(s, c)] = out[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
    }
    return out;
}

inline std::vector<gf::Vec> decode_recursive(const EncodedArray& enc, std::span<const int> nodes) {
    return decode_recursive(enc.array.code, enc.map, nodes,
                            [&](int v, int s) { return enc.array.at(v, s); });
}

} // namespace pbec
