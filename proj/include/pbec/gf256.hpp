/**************************************************************************
 * gf256.hpp
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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "errors.hpp"

namespace pbec::gf {

/// One GF(2^8) element: a polynomial over GF(2) of degree < 8, packed into a byte.
using Elem = std::uint8_t;

using Vec = std::vector<Elem>;

/// Reduction polynomial x^8 + x^4 + x^3 + x^2 + 1.
inline constexpr unsigned kPoly = 0x11d;

/// Shift-and-reduce product. Table-free; serves as the independent
/// reference for the table-driven mul.
constexpr Elem mul_notable(Elem a, Elem b) {
    unsigned acc = 0;
    unsigned aa = a;
    for (unsigned bb = b; bb != 0; bb >>= 1) {
        if (bb & 1u)
            acc ^= aa;
        aa <<= 1;
        if (aa & 0x100u)
            aa ^= kPoly;
    }
    return static_cast<Elem>(acc);
}

/// Log/antilog tables over the multiplicative group generated by x (0x02).
/// exp is doubled in length so mul needs no modular reduction of exponents.
struct Tables {
    std::array<Elem, 256> log{}; // log[0] unused
    std::array<Elem, 510> exp{};
};

constexpr Tables make_tables() {
    Tables t{};
    unsigned x = 1;
    for (unsigned i = 0; i < 255; ++i) {
        t.exp[i] = static_cast<Elem>(x);
        t.log[x] = static_cast<Elem>(i);
        x <<= 1;
        if (x & 0x100u)
            x ^= kPoly;
    }
    for (unsigned i = 255; i < 510; ++i)
        t.exp[i] = t.exp[i - 255];
    return t;
}

inline constexpr Tables tables = make_tables();

constexpr Elem add(Elem a, Elem b) { return a ^ b; } // == sub: char 2

inline Elem mul(Elem a, Elem b) {
    if (a == 0 || b == 0)
        return 0;
    return tables.exp[unsigned(tables.log[a]) + unsigned(tables.log[b])];
}

inline Elem inv(Elem a) {
    if (a == 0)
        throw ParamError("no inverse of zero");
    return tables.exp[255 - unsigned(tables.log[a])];
}

inline Elem div(Elem a, Elem b) { return mul(a, inv(b)); }

/// a^e with non-negative integer exponent; pow_u(0, 0) = 1.
inline Elem pow_u(Elem a, unsigned e) {
    if (e == 0)
        return 1;
    if (a == 0)
        return 0;
    return tables.exp[(unsigned(tables.log[a]) * e) % 255u];
}

/// Tally of field operations performed by a repair path.
struct OpCounter {
    std::uint64_t mul = 0;
    std::uint64_t add = 0;

    OpCounter& operator+=(const OpCounter& o) {
        mul += o.mul;
        add += o.add;
        return *this;
    }
};

inline Elem mul(Elem a, Elem b, OpCounter& c) {
    ++c.mul;
    return mul(a, b);
}

constexpr Elem add(Elem a, Elem b, OpCounter& c) {
    ++c.add;
    return add(a, b);
}

inline Elem dot(std::span<const Elem> a, std::span<const Elem> b) {
    Elem acc = 0;
    const std::size_t m = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t i = 0; i < m; ++i)
        acc ^= mul(a[i], b[i]);
    return acc;
}

/// Dense row-major matrix of field elements.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), d_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem& operator()(std::size_t r, std::size_t c) { return d_[r * cols_ + c]; }
    Elem operator()(std::size_t r, std::size_t c) const { return d_[r * cols_ + c]; }

    std::span<Elem> row(std::size_t r) { return {d_.data() + r * cols_, cols_}; }
    std::span<const Elem> row(std::size_t r) const { return {d_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Elem> d_;
};

inline Vec mat_vec(const Matrix& a, std::span<const Elem> x) {
    Vec y(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        y[r] = dot(a.row(r), x);
    return y;
}

namespace detail {

// Gauss-Jordan on [a | y]. Pivots are the first nonzero entry scanning
// downward; magnitude is irrelevant in a finite field. Returns the pivot
// row of each column (or npos) and the rank.
struct Elimination {
    std::vector<std::size_t> pivot_row; // per column; npos if none
    std::size_t rank = 0;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline Elimination eliminate(Matrix& a, Vec& y, OpCounter* ctr = nullptr) {
    const std::size_t rows = a.rows(), cols = a.cols();
    Elimination e;
    e.pivot_row.assign(cols, Elimination::npos);
    std::size_t next = 0; // first unused row
    for (std::size_t col = 0; col < cols && next < rows; ++col) {
        std::size_t piv = next;
        while (piv < rows && a(piv, col) == 0)
            ++piv;
        if (piv == rows)
            continue;
        if (piv != next) {
            for (std::size_t c = 0; c < cols; ++c)
                std::swap(a(piv, c), a(next, c));
            std::swap(y[piv], y[next]);
        }
        const Elem scale = inv(a(next, col));
        if (scale != 1) {
            for (std::size_t c = col; c < cols; ++c)
                a(next, c) = mul(a(next, c), scale);
            y[next] = mul(y[next], scale);
            if (ctr)
                ctr->mul += cols - col + 1;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == next)
                continue;
            const Elem f = a(r, col);
            if (f == 0)
                continue;
            for (std::size_t c = col; c < cols; ++c)
                a(r, c) ^= mul(f, a(next, c));
            y[r] ^= mul(f, y[next]);
            if (ctr) {
                ctr->mul += cols - col + 1;
                ctr->add += cols - col + 1;
            }
        }
        e.pivot_row[col] = next;
        ++next;
    }
    e.rank = next;
    return e;
}

} // namespace detail

inline std::size_t rank(Matrix a) {
    Vec y(a.rows(), 0);
    return detail::eliminate(a, y).rank;
}

inline bool invertible(const Matrix& a) {
    return a.rows() == a.cols() && rank(a) == a.rows();
}

/// Solves the square system a·x = y.
inline Vec solve_linear(Matrix a, Vec y, OpCounter* ctr = nullptr) {
    if (a.rows() != a.cols() || y.size() != a.rows())
        throw ParamError("solve_linear: dimension mismatch");
    const auto e = detail::eliminate(a, y, ctr);
    if (e.rank < a.cols())
        throw SingularSystem("singular system", e.rank);
    Vec x(a.cols());
    for (std::size_t col = 0; col < a.cols(); ++col)
        x[col] = y[e.pivot_row[col]];
    return x;
}

/// Solves a·x = y with rows ≥ cols. The system must determine x uniquely
/// and every surplus equation must agree with the solution.
inline Vec solve_consistent(Matrix a, Vec y) {
    if (y.size() != a.rows() || a.rows() < a.cols())
        throw ParamError("solve_consistent: dimension mismatch");
    const auto e = detail::eliminate(a, y);
    if (e.rank < a.cols())
        throw SingularSystem("singular system", e.rank);
    for (std::size_t r = e.rank; r < a.rows(); ++r)
        if (y[r] != 0)
            throw DataError("inconsistent symbols");
    Vec x(a.cols());
    for (std::size_t col = 0; col < a.cols(); ++col)
        x[col] = y[e.pivot_row[col]];
    return x;
}

} // namespace pbec::gf
