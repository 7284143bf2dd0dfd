/**************************************************************************
 * analysis.hpp
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

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rational.hpp"

namespace pbec::analysis {

/// Even split of `total` items into `parts` groups: the first `high_count`
/// groups get `high`, the rest `low`.
struct EvenSplit {
    long long low = 0, high = 0, high_count = 0;

    long long sum_of_squares(long long parts) const {
        return high_count * high * high + (parts - high_count) * low * low;
    }
};

inline EvenSplit even_split(long long total, long long parts) {
    if (parts < 1)
        throw ParamError("even_split: parts must be positive");
    EvenSplit e;
    e.low = total / parts;
    e.high = (total + parts - 1) / parts;
    e.high_count = total - parts * e.low;
    return e;
}

/// Average repair ratio of a systematic node under the RSR-II layout with
/// 2r-3 stripes: (k^2 (r-2) + (r-1) (t t_h^2 + (r-1-t) t_l^2)) / (k^2 (2r-3)).
inline Rational gamma1(int n, int k) {
    const int r = n - k;
    if (r < 3)
        throw ParamError("gamma1: RSR-II requires at least 3 parities");
    if (k < 1)
        throw ParamError("gamma1: k must be positive");
    const auto e = even_split(k, r - 1);
    const long long k2 = static_cast<long long>(k) * k;
    return Rational(k2 * (r - 2) + (r - 1) * e.sum_of_squares(r - 1), k2 * (2 * r - 3));
}

/// Stripe-repair ratio of the protected stripes under RSR-II:
/// (t t_h^2 + (r-1-t) t_l^2) / k^2. At least 1/(r-1), with equality
/// exactly when r-1 divides k.
inline Rational eta_protected_rsr2(int n, int k) {
    const int r = n - k;
    if (r < 3)
        throw ParamError("eta_protected_rsr2: requires at least 3 parities");
    const auto e = even_split(k, r - 1);
    return Rational(e.sum_of_squares(r - 1), static_cast<long long>(k) * k);
}

/// Floor of gamma1 over all k for fixed r: (r-1)/(2r-3), attained when
/// r-1 divides k.
inline Rational min_gamma1(int r) {
    if (r < 3)
        throw ParamError("min_gamma1: requires at least 3 parities");
    return Rational(r - 1, 2 * r - 3);
}

inline void check_gen_params(int n, int k, int s, int p) {
    if (k < 2 || k >= n || n > 255)
        throw ParamError("code parameters must satisfy 2 <= k < n <= 255");
    if (s < 1 || p < 1)
        throw ParamError("need s >= 1 and p >= 1");
    if ((n - k - 1) * p < s)
        throw ParamError("insufficient Region D capacity: (r-1)*p >= s is required");
}

/// Average repair ratio of a systematic node under the generalized layout:
/// (k^2 p + sum of squared function sizes) / (k^2 (s+p)).
inline Rational gamma2(int n, int k, int s, int p) {
    check_gen_params(n, k, s, p);
    const int r = n - k;
    const long long m = static_cast<long long>(r - 1) * p;
    const auto e = even_split(static_cast<long long>(k) * s, m);
    const long long k2 = static_cast<long long>(k) * k;
    return Rational(k2 * p + e.sum_of_squares(m), k2 * (s + p));
}

struct GammaBounds {
    Rational low, up;
};

/// Bounds on gamma2 as functions of the protected proportion
/// p_p = s/(s+p):
///   low = (1-p_p) + p_p^2 / ((1-p_p)(r-1))
///   up  = low + (1-p_p)(r-1)/(4k^2)
inline GammaBounds gamma2_bounds(int n, int k, int s, int p) {
    check_gen_params(n, k, s, p);
    const int r = n - k;
    const Rational pp(s, s + p);
    const Rational one_minus(p, s + p);
    const Rational low = one_minus + pp * pp / (one_minus * Rational(r - 1));
    const Rational up = low + one_minus * Rational(r - 1, 4LL * k * k);
    return {low, up};
}

/// Continuous-variable forms of the same bounds, for curve sampling.
inline double gamma_low_curve(int r, double pp) {
    return (1.0 - pp) + pp * pp / ((1.0 - pp) * (r - 1));
}

inline double gamma_up_curve(int r, int k, double pp) {
    return gamma_low_curve(r, pp) + (1.0 - pp) * (r - 1) / (4.0 * k * k);
}

inline double argmin_gamma_low(int r) { return 1.0 - 1.0 / std::sqrt(double(r)); }

inline double min_gamma_low(int r) { return 2.0 / (std::sqrt(double(r)) + 1.0); }

inline double argmin_gamma_up(int r, int k) {
    const double rr = r + double(r - 1) * (r - 1) / (4.0 * k * k);
    return 1.0 - 1.0 / std::sqrt(rr);
}

inline double min_gamma_up(int r, int k) {
    const double rr = r + double(r - 1) * (r - 1) / (4.0 * k * k);
    return (-2.0 + 2.0 * std::sqrt(rr)) / (r - 1);
}

/// Repair ratio of a minimum-storage regenerating code with d helpers:
/// d / (k (d - k + 1)). With d = n-1 and rate 1/2 this is 2/r - 1/r^2.
inline Rational gamma_msr_d(int n, int k, int d) {
    if (k < 1 || d < k || d > n - 1)
        throw ParamError("gamma_msr: need k <= d <= n-1");
    return Rational(d, static_cast<long long>(k) * (d - k + 1));
}

inline Rational gamma_msr(int n, int k) { return gamma_msr_d(n, k, n - 1); }

struct OptResult {
    int s = 0, p = 0;
    Rational gamma;
};

/// Exhaustive minimizer of gamma2 over 1 <= s, 1 <= p, s+p <= max_stripes,
/// (r-1)p >= s. Ties go to the smaller stripe count, then the smaller p.
inline OptResult optimize_sp(int n, int k, int max_stripes = 32) {
    if (max_stripes < 2)
        throw ParamError("optimize_sp: max_stripes must be at least 2");
    if (k < 2 || k >= n || n > 255)
        throw ParamError("code parameters must satisfy 2 <= k < n <= 255");
    const int r = n - k;
    std::optional<OptResult> best;
    for (int total = 2; total <= max_stripes; ++total)
        for (int p = 1; p < total; ++p) {
            const int s = total - p;
            if (static_cast<long long>(r - 1) * p < s)
                continue;
            const Rational g = gamma2(n, k, s, p);
            if (!best || g < best->gamma)
                best = OptResult{s, p, g};
        }
    if (!best)
        throw ParamError("optimize_sp: no feasible (s,p) pair");
    return *best;
}

struct TableConfig {
    int n = 0, k = 0;
    int s = 0, p = 0;       // 0,0 = choose via optimize_sp
    int max_stripes = 32;
};

/// One comparison row per configuration, comma-separated with a fixed
/// header; ratios rendered to 4 decimals (round-half-even).
inline void emit_tables(std::span<const TableConfig> configs, std::ostream& os) {
    os << "n,k,r,s,p,stripes,gamma1,gamma2,gamma_low,gamma_up,gamma_msr\n";
    for (const auto& cfg : configs) {
        const int r = cfg.n - cfg.k;
        int s = cfg.s, p = cfg.p;
        if (s == 0 && p == 0) {
            const auto opt = optimize_sp(cfg.n, cfg.k, cfg.max_stripes);
            s = opt.s;
            p = opt.p;
        }
        const auto bounds = gamma2_bounds(cfg.n, cfg.k, s, p);
        os << cfg.n << ',' << cfg.k << ',' << r << ',' << s << ',' << p << ',' << (s + p) << ','
           << (r >= 3 ? gamma1(cfg.n, cfg.k).fixed(4) : std::string("-")) << ','
           << gamma2(cfg.n, cfg.k, s, p).fixed(4) << ',' << bounds.low.fixed(4) << ','
           << bounds.up.fixed(4) << ',' << gamma_msr(cfg.n, cfg.k).fixed(4) << '\n';
    }
}

/// Samples gamma_low/gamma_up over p_p in (0,1).
inline void emit_bound_curves(int n, int k, int samples, std::ostream& os) {
    if (k < 1 || k >= n || samples < 1)
        throw ParamError("emit_bound_curves: invalid arguments");
    const int r = n - k;
    if (r < 2)
        throw ParamError("emit_bound_curves: need r >= 2");
    os << "pp,gamma_low,gamma_up\n";
    char buf[96];
    for (int i = 1; i <= samples; ++i) {
        const double pp = double(i) / double(samples + 1);
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", pp, gamma_low_curve(r, pp),
                      gamma_up_curve(r, k, pp));
        os << buf;
    }
}

/// Minima over the protected proportion as functions of r at rate 1/2
/// (k = r), next to the RSR-II floor and the MSR baseline.
inline void emit_min_curves(int r_lo, int r_hi, std::ostream& os) {
    if (r_lo < 3 || r_hi < r_lo)
        throw ParamError("emit_min_curves: need 3 <= r_lo <= r_hi");
    os << "r,min_gamma1,min_gamma_low,min_gamma_up,gamma_msr\n";
    char buf[128];
    for (int r = r_lo; r <= r_hi; ++r) {
        const Rational msr(2LL * r - 1, static_cast<long long>(r) * r);
        std::snprintf(buf, sizeof buf, "%d,%s,%.6f,%.6f,%s\n", r, min_gamma1(r).fixed(6).c_str(),
                      min_gamma_low(r), min_gamma_up(r, r), msr.fixed(6).c_str());
        os << buf;
    }
}

} // namespace pbec::analysis
