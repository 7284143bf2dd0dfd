/**************************************************************************
 * mds.hpp
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

#include <map>
#include <span>
#include <vector>

#include "gf256.hpp"

namespace pbec {

/// Systematic (n,k) MDS code over GF(2^8). Codeword position i < k stores
/// message symbol i; position k+j stores the dot product of parity row j
/// with the message.
struct CodeParams {
    int n = 0;
    int k = 0;
    std::vector<gf::Vec> parity_rows; // r rows of length k, all entries nonzero

    int r() const { return n - k; }
};

/// Checks the MDS property by brute force: every square submatrix of the
/// parity matrix must be invertible. Exponential in n; intended for the
/// small codes used in tests.
inline bool is_mds(const CodeParams& code) {
    const int r = code.r(), k = code.k;
    const int limit = r < k ? r : k;
    std::vector<int> rows, cols;
    // enumerate subsets via bitmasks
    for (int m = 1; m <= limit; ++m) {
        for (unsigned rm = 0; rm < (1u << r); ++rm) {
            if (__builtin_popcount(rm) != m)
                continue;
            for (unsigned cm = 0; cm < (1u << k); ++cm) {
                if (__builtin_popcount(cm) != m)
                    continue;
                gf::Matrix sub(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
                int ri = 0;
                for (int i = 0; i < r; ++i) {
                    if (!(rm & (1u << i)))
                        continue;
                    int ci = 0;
                    for (int j = 0; j < k; ++j) {
                        if (!(cm & (1u << j)))
                            continue;
                        sub(static_cast<std::size_t>(ri), static_cast<std::size_t>(ci)) =
                            code.parity_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                        ++ci;
                    }
                    ++ri;
                }
                if (!gf::invertible(sub))
                    return false;
            }
        }
    }
    return true;
}

/// Builds the code whose parity matrix is the Cauchy matrix with entry
/// (i,j) = inv((k+i) + j), rows i < r, columns j < k. Every square
/// submatrix of a Cauchy matrix is invertible, so the code is MDS, and
/// every entry is nonzero.
inline CodeParams make_code(int n, int k) {
    if (k < 2 || k >= n || n > 255)
        throw ParamError("code parameters must satisfy 2 <= k < n <= 255");
    CodeParams code;
    code.n = n;
    code.k = k;
    code.parity_rows.reserve(static_cast<std::size_t>(n - k));
    for (int i = 0; i < n - k; ++i) {
        gf::Vec row(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j)
            row[static_cast<std::size_t>(j)] =
                gf::inv(static_cast<gf::Elem>((k + i) ^ j));
        code.parity_rows.push_back(std::move(row));
    }
#ifndef NDEBUG
    if (n <= 12 && !is_mds(code))
        throw InternalError("constructed parity matrix is not MDS");
#endif
    return code;
}

/// Systematic encode of one message vector of length k.
inline gf::Vec encode(const CodeParams& code, std::span<const gf::Elem> u) {
    if (u.size() != static_cast<std::size_t>(code.k))
        throw ParamError("encode: message length must equal k");
    gf::Vec w(static_cast<std::size_t>(code.n));
    for (int c = 0; c < code.k; ++c)
        w[static_cast<std::size_t>(c)] = u[static_cast<std::size_t>(c)];
    for (int j = 0; j < code.r(); ++j)
        w[static_cast<std::size_t>(code.k + j)] =
            gf::dot(code.parity_rows[static_cast<std::size_t>(j)], u);
    return w;
}

/// Recovers the message from any >= k known codeword positions.
inline gf::Vec reconstruct(const CodeParams& code, const std::map<int, gf::Elem>& known) {
    if (known.size() < static_cast<std::size_t>(code.k))
        throw ParamError("insufficient symbols: need at least k positions");
    gf::Matrix a(known.size(), static_cast<std::size_t>(code.k));
    gf::Vec y(known.size());
    std::size_t row = 0;
    for (const auto& [pos, val] : known) {
        if (pos < 0 || pos >= code.n)
            throw ParamError("reconstruct: position out of range");
        if (pos < code.k)
            a(row, static_cast<std::size_t>(pos)) = 1;
        else
            for (int c = 0; c < code.k; ++c)
                a(row, static_cast<std::size_t>(c)) =
                    code.parity_rows[static_cast<std::size_t>(pos - code.k)][static_cast<std::size_t>(c)];
        y[row] = val;
        ++row;
    }
    return gf::solve_consistent(std::move(a), std::move(y));
}

/// Recovers systematic symbol `missing` from the other k-1 systematic
/// symbols plus the first parity symbol. `systematic` holds the survivors
/// in position order with `missing` skipped. Costs exactly k field
/// multiplications and k-1 additions.
inline gf::Elem repair_symbol(const CodeParams& code, int missing,
                              std::span<const gf::Elem> systematic,
                              gf::Elem first_parity, gf::OpCounter* ctr = nullptr) {
    if (missing < 0 || missing >= code.k)
        throw ParamError("repair_symbol: missing position must be systematic");
    if (systematic.size() != static_cast<std::size_t>(code.k - 1))
        throw ParamError("repair_symbol: expected the k-1 surviving systematic symbols");
    gf::OpCounter local;
    const gf::Vec& p1 = code.parity_rows[0];
    gf::Elem acc = first_parity;
    std::size_t s = 0;
    for (int c = 0; c < code.k; ++c) {
        if (c == missing)
            continue;
        acc = gf::add(acc, gf::mul(p1[static_cast<std::size_t>(c)], systematic[s], local), local);
        ++s;
    }
    const gf::Elem out = gf::mul(gf::inv(p1[static_cast<std::size_t>(missing)]), acc, local);
    if (ctr)
        *ctr += local;
    return out;
}

} // namespace pbec
