// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Count series for N-type functions, log-log slope fits, and the search for
/// d where 3 | h(Q(sqrt(-3d))) but 3 does not divide h(Q(sqrt(d))).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ccs/classnum.hpp"
#include "ccs/errors.hpp"
#include "ccs/honda.hpp"
#include "ccs/intmath.hpp"
#include "ccs/parallel.hpp"

namespace ccs {

struct checkpoint {
    u64 x = 0;
    u64 count = 0;

    friend bool operator==(const checkpoint&, const checkpoint&) = default;
};

struct count_series {
    std::string label;
    std::vector<checkpoint> checkpoints;
};

/// Largest |D| the form-enumeration oracles are asked to handle.
inline constexpr i64 oracle_max_discriminant = 10'000'000;

/// Largest d whose fundamental discriminant (at most 4d) stays in oracle range.
inline constexpr u64 oracle_max_d = oracle_max_discriminant / 4;

inline constexpr u64 default_truth_x_max = 10'000;

inline void require_increasing(std::span<const u64> xs)
{
    if (xs.empty()) {
        throw config_error("checkpoint list is empty");
    }
    if (xs.front() == 0) {
        throw config_error("checkpoints must be positive");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] <= xs[i - 1]) {
            throw config_error("checkpoints must be strictly increasing");
        }
    }
}

/// Tallies sorted values at each checkpoint: count of values <= X.
inline std::vector<checkpoint> tally(std::span<const u64> sorted_values, std::span<const u64> xs)
{
    std::vector<checkpoint> out;
    out.reserve(xs.size());
    for (const u64 x : xs) {
        const auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), x);
        out.push_back({x, static_cast<u64>(it - sorted_values.begin())});
    }
    return out;
}

/// N_honda: one enumeration at the last checkpoint, counted at every checkpoint.
inline count_series honda_count_series(std::span<const u64> xs, const enum_config& config, u64 cap = 1'000'000)
{
    require_increasing(xs);
    if (xs.back() > cap) {
        throw config_error("checkpoint " + std::to_string(xs.back()) + " exceeds enumeration cap " + std::to_string(cap));
    }
    std::vector<u64> ds;
    if (xs.back() >= 2) {
        for (const auto& w : enumerate_discriminants(xs.back(), config)) {
            ds.push_back(w.d);
        }
    }
    return {"N_honda", tally(ds, xs)};
}

/// Squarefree d in [2, x_max] with 3 | h(Q(sqrt(d))), ascending.
inline std::vector<u64> three_divisible_real_parameters(u64 x_max, unsigned workers = 1)
{
    if (x_max > oracle_max_d) {
        throw config_error("truth range " + std::to_string(x_max) + " exceeds oracle range " + std::to_string(oracle_max_d));
    }
    std::vector<char> hit(x_max + 1, 0);
    detail::parallel_blocks(2, x_max, 256, workers, [&](unsigned, u64 lo, u64 hi) {
        for (u64 d = lo; d <= hi; ++d) {
            if (is_squarefree(d) && three_divides_real_class_number(d)) {
                hit[d] = 1;
            }
        }
    });
    std::vector<u64> out;
    for (u64 d = 2; d <= x_max; ++d) {
        if (hit[d] != 0) {
            out.push_back(d);
        }
    }
    return out;
}

/// N_plus_truth: oracle sweep over every squarefree d up to the last checkpoint.
inline count_series truth_count_series(std::span<const u64> xs, u64 x_max = default_truth_x_max, unsigned workers = 1)
{
    require_increasing(xs);
    if (x_max > oracle_max_d) {
        throw config_error("truth range " + std::to_string(x_max) + " exceeds oracle range " + std::to_string(oracle_max_d));
    }
    if (xs.back() > x_max) {
        throw config_error("checkpoint " + std::to_string(xs.back()) + " exceeds truth range " + std::to_string(x_max));
    }
    const auto ds = three_divisible_real_parameters(xs.back(), workers);
    return {"N_plus_truth", tally(ds, xs)};
}

struct slope_report {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_max = 0.0;
    u64 x_lo = 0;
    u64 x_hi = 0;
    std::size_t points = 0;
};

/// Least squares of log(count) on log(X) over checkpoints in [x_lo, x_hi]
/// with count >= 1. Throws std::domain_error with fewer than 3 such points.
inline slope_report fit_slope(const count_series& series, u64 x_lo, u64 x_hi)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : series.checkpoints) {
        if (c.x >= x_lo && c.x <= x_hi && c.count >= 1) {
            pts.emplace_back(std::log(static_cast<double>(c.x)), std::log(static_cast<double>(c.count)));
        }
    }
    if (pts.size() < 3) {
        throw std::domain_error("fit_slope: need at least 3 checkpoints with count >= 1 in the window, have " +
                                std::to_string(pts.size()));
    }
    const double k = static_cast<double>(pts.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= k;
    my /= k;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    slope_report r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    for (const auto& [x, y] : pts) {
        r.residual_max = std::max(r.residual_max, std::abs(y - (r.intercept + r.slope * x)));
    }
    r.x_lo = x_lo;
    r.x_hi = x_hi;
    r.points = pts.size();
    return r;
}

struct scholz_counterexample {
    u64 d = 0;
    u64 h_real = 0;  // narrow
    u64 h_imag = 0;

    friend bool operator==(const scholz_counterexample&, const scholz_counterexample&) = default;
};

/// Squarefree kernel of -3d: -d/3 when 3 | d, else -3d.
inline i64 minus_three_d_kernel(u64 d)
{
    if (d < 1 || !is_squarefree(d)) {
        throw std::domain_error("minus_three_d_kernel: d must be squarefree");
    }
    return d % 3 == 0 ? -static_cast<i64>(d / 3) : -3 * static_cast<i64>(d);
}

/// Class number of Q(sqrt(-3d)).
inline u64 imaginary_class_number_of_minus_3d(u64 d)
{
    const i64 k = minus_three_d_kernel(d);
    return class_number_imaginary(fundamental_discriminant(k)).count;
}

/// Every squarefree d in [2, bound] with 3 | h(Q(sqrt(-3d))) and 3 not dividing
/// h+(Q(sqrt(d))), ascending.
inline std::vector<scholz_counterexample> scholz_counterexample_search(u64 bound, unsigned workers = 1)
{
    if (bound > oracle_max_d) {
        throw config_error("scholz bound " + std::to_string(bound) + " exceeds oracle range " + std::to_string(oracle_max_d));
    }
    if (bound < 2) {
        return {};
    }
    std::vector<scholz_counterexample> found(bound + 1);
    detail::parallel_blocks(2, bound, 256, workers, [&](unsigned, u64 lo, u64 hi) {
        for (u64 d = lo; d <= hi; ++d) {
            if (!is_squarefree(d)) {
                continue;
            }
            const u64 h_imag = imaginary_class_number_of_minus_3d(d);
            if (h_imag % 3 != 0) {
                continue;
            }
            const u64 h_real = class_number_real_narrow(fundamental_discriminant(static_cast<i64>(d))).count;
            if (h_real % 3 != 0) {
                found[d] = {d, h_real, h_imag};
            }
        }
    });
    std::vector<scholz_counterexample> out;
    for (const auto& c : found) {
        if (c.d != 0) {
            out.push_back(c);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV: series as `# label` then `X,count`; counterexamples as `d,h_real_narrow,h_imag`.

inline void write_series_csv(std::ostream& out, const count_series& series)
{
    out << "# " << series.label << "\nX,count\n";
    for (const auto& c : series.checkpoints) {
        out << c.x << ',' << c.count << '\n';
    }
}

inline void write_counterexample_csv(std::ostream& out, std::span<const scholz_counterexample> rows)
{
    out << "d,h_real_narrow,h_imag\n";
    for (const auto& c : rows) {
        out << c.d << ',' << c.h_real << ',' << c.h_imag << '\n';
    }
}

/// Audit dump `D,h,kind`.
inline void write_class_number_csv(std::ostream& out, std::span<const class_number_result> rows)
{
    out << "D,h,kind\n";
    for (const auto& r : rows) {
        out << r.discriminant << ',' << r.count << ',' << to_string(r.kind) << '\n';
    }
}

}  // namespace ccs
