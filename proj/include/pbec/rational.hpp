/**************************************************************************
 * rational.hpp
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

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace pbec {

/// Exact rational with 64-bit numerator/denominator, normalized so the
/// denominator is positive and gcd(num, den) = 1. Intermediates run in
/// 128 bits; anything that cannot be reduced back into 64 bits throws.
class Rational {
public:
    constexpr Rational() = default;
    Rational(long long num, long long den = 1) { assign(num, den); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0)
            throw ParamError("rational division by zero");
        return from128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    /// Fixed-point decimal rendering with round-half-even ties.
    std::string fixed(int digits) const {
        i128 scale = 1;
        for (int i = 0; i < digits; ++i)
            scale *= 10;
        const bool neg = num_ < 0;
        const i128 mag = neg ? -i128(num_) : i128(num_);
        const i128 scaled = mag * scale;
        i128 q = scaled / den_;
        const i128 rem2 = (scaled % den_) * 2;
        if (rem2 > den_ || (rem2 == den_ && (q & 1)))
            ++q;
        const i128 ip = q / scale;
        i128 fp = q % scale;
        std::string frac(static_cast<std::size_t>(digits), '0');
        for (int i = digits - 1; i >= 0; --i) {
            frac[static_cast<std::size_t>(i)] = static_cast<char>('0' + int(fp % 10));
            fp /= 10;
        }
        std::string out = neg && q != 0 ? "-" : "";
        out += std::to_string(static_cast<long long>(ip));
        if (digits > 0) {
            out += '.';
            out += frac;
        }
        return out;
    }

private:
    using i128 = __int128;

    void assign(long long num, long long den) {
        if (den == 0)
            throw ParamError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        num_ = g ? num / g : num;
        den_ = g ? den / g : den;
    }

    static Rational from128(i128 num, i128 den) {
        if (den == 0)
            throw ParamError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const i128 g = gcd128(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        constexpr i128 lo = std::numeric_limits<long long>::min();
        constexpr i128 hi = std::numeric_limits<long long>::max();
        if (num < lo || num > hi || den > hi)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<long long>(num);
        r.den_ = static_cast<long long>(den);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            const i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    long long num_ = 0;
    long long den_ = 1;
};

} // namespace pbec
