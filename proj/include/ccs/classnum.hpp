// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Class numbers of quadratic fields from binary quadratic forms.
///
/// Negative discriminants: count reduced positive definite forms.
/// Positive discriminants: count rho-cycles of reduced indefinite forms, which
/// gives the narrow class number h+. h+ is h or 2h, so 3 | h iff 3 | h+.
/// The analytic class number formula provides an independent estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ccs/intmath.hpp"

namespace ccs {

/// a x^2 + b x y + c y^2
struct quadratic_form {
    i64 a = 0;
    i64 b = 0;
    i64 c = 0;

    constexpr i64 discriminant() const { return b * b - 4 * a * c; }

    friend bool operator==(const quadratic_form&, const quadratic_form&) = default;
    friend auto operator<=>(const quadratic_form&, const quadratic_form&) = default;
};

enum class class_number_kind { imaginary_exact, real_narrow };

inline std::string_view to_string(class_number_kind k)
{
    return k == class_number_kind::imaginary_exact ? "imaginary_exact" : "real_narrow";
}

struct class_number_result {
    i64 discriminant = 0;
    u64 count = 0;
    class_number_kind kind = class_number_kind::imaginary_exact;
};

/// D = 1 (mod 4) squarefree, or D = 4m with m = 2, 3 (mod 4) squarefree. D = 1 excluded.
inline bool is_fundamental_discriminant(i64 D)
{
    if (D == 0 || D == 1) {
        return false;
    }
    const i64 r = mod_floor(D, 4);
    if (r == 1) {
        return is_squarefree(D);
    }
    if (r == 0) {
        const i64 m = D / 4;
        const i64 mr = mod_floor(m, 4);
        return (mr == 2 || mr == 3) && is_squarefree(m);
    }
    return false;
}

inline bool is_primitive(const quadratic_form& f)
{
    const auto mag = [](i64 v) { return static_cast<u64>(v < 0 ? -v : v); };
    u64 g = std::gcd(mag(f.a), mag(f.b));
    g = std::gcd(g, mag(f.c));
    return g == 1;
}

namespace detail {

constexpr i64 floor_div(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Negative discriminants

/// Reduced: |b| <= a <= c, and b >= 0 if |b| = a or a = c.
inline bool is_reduced_definite(const quadratic_form& f)
{
    if (f.a <= 0) {
        return false;
    }
    const i64 ab = f.b < 0 ? -f.b : f.b;
    if (ab > f.a || f.a > f.c) {
        return false;
    }
    if ((ab == f.a || f.a == f.c) && f.b < 0) {
        return false;
    }
    return true;
}

/// Gauss reduction of a positive definite form to the reduced form of its class.
inline quadratic_form reduce_definite(quadratic_form f)
{
    const i64 D = f.discriminant();
    if (D >= 0 || f.a <= 0) {
        throw std::domain_error("reduce_definite: form is not positive definite");
    }
    const auto normalize = [D](quadratic_form& g) {
        // b -> b + 2ak in (-a, a]
        const i64 k = detail::floor_div(g.a - g.b, 2 * g.a);
        g.b += 2 * g.a * k;
        g.c = (g.b * g.b - D) / (4 * g.a);
    };
    normalize(f);
    while (f.a > f.c) {
        f = {f.c, -f.b, f.a};
        normalize(f);
    }
    if (f.a == f.c && f.b < 0) {
        f.b = -f.b;
    }
    return f;
}

inline void require_negative_fundamental(i64 D)
{
    if (D >= 0) {
        throw std::domain_error("class_number_imaginary: discriminant must be negative");
    }
    if (!is_fundamental_discriminant(D)) {
        throw std::domain_error("class_number_imaginary: discriminant is not fundamental");
    }
}

/// All reduced primitive forms of discriminant D < 0; a runs up to sqrt(|D|/3).
inline std::vector<quadratic_form> reduced_definite_forms(i64 D)
{
    std::vector<quadratic_form> forms;
    const i64 a_max = static_cast<i64>(isqrt(static_cast<u64>(-D) / 3));
    for (i64 a = 1; a <= a_max; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            const i64 num = b * b - D;
            if (num % (4 * a) != 0) {
                continue;
            }
            const quadratic_form f{a, b, num / (4 * a)};
            if (is_reduced_definite(f) && is_primitive(f)) {
                forms.push_back(f);
            }
        }
    }
    return forms;
}

inline class_number_result class_number_imaginary(i64 D)
{
    require_negative_fundamental(D);
    return {D, reduced_definite_forms(D).size(), class_number_kind::imaginary_exact};
}

/// Enumerates every primitive form with 1 <= a <= window, -a < b <= a, reduces
/// each one and counts distinct results. Any window >= sqrt(|D|/3) reaches
/// every class, so the count must agree with class_number_imaginary.
inline u64 class_number_imaginary_widened(i64 D, i64 window)
{
    require_negative_fundamental(D);
    std::set<quadratic_form> classes;
    for (i64 a = 1; a <= window; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            const i64 num = b * b - D;
            if (num % (4 * a) != 0) {
                continue;
            }
            const quadratic_form f{a, b, num / (4 * a)};
            if (is_primitive(f)) {
                classes.insert(reduce_definite(f));
            }
        }
    }
    return classes.size();
}

// ---------------------------------------------------------------------------
// Positive discriminants

inline void require_positive_fundamental(i64 D, const char* who)
{
    if (D <= 0 || is_perfect_square(static_cast<u64>(D))) {
        throw std::domain_error(std::string(who) + ": discriminant must be positive and not a square");
    }
    if (!is_fundamental_discriminant(D)) {
        throw std::domain_error(std::string(who) + ": discriminant is not fundamental");
    }
}

/// 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, decided in integers.
inline bool is_reduced_indefinite(const quadratic_form& f, i64 D)
{
    if (f.b <= 0 || f.b * f.b >= D || f.a == 0) {
        return false;
    }
    const i64 a2 = 2 * (f.a < 0 ? -f.a : f.a);
    const i64 lo = a2 + f.b;  // > sqrt(D)
    const i64 hi = a2 - f.b;  // < sqrt(D)
    return lo * lo > D && (hi <= 0 || hi * hi < D);
}

/// Reduction step (a, b, c) -> (c, b', (b'^2 - D)/(4c)) with b' = -b (mod 2|c|)
/// and sqrt(D) - 2|c| < b' < sqrt(D). Requires |c| < sqrt(D), which holds for
/// reduced forms.
inline quadratic_form rho(const quadratic_form& f, i64 D)
{
    const i64 s = static_cast<i64>(isqrt(static_cast<u64>(D)));
    const i64 c2 = 2 * (f.c < 0 ? -f.c : f.c);
    const i64 b = s - mod_floor(s + f.b, c2);
    return {f.c, b, (b * b - D) / (4 * f.c)};
}

/// All reduced primitive indefinite forms of discriminant D.
inline std::vector<quadratic_form> reduced_indefinite_forms(i64 D)
{
    std::vector<quadratic_form> forms;
    const i64 s = static_cast<i64>(isqrt(static_cast<u64>(D)));
    for (i64 b = (D % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        const i64 n = (D - b * b) / 4;  // a c = -n
        for (i64 q = 1; q * q <= n; ++q) {
            if (n % q != 0) {
                continue;
            }
            const i64 pair[2] = {q, n / q};
            for (int k = 0; k < (pair[0] == pair[1] ? 1 : 2); ++k) {
                const i64 a = pair[k];
                for (const i64 sa : {a, -a}) {
                    const quadratic_form f{sa, b, -n / sa};
                    if (is_reduced_indefinite(f, D) && is_primitive(f)) {
                        forms.push_back(f);
                    }
                }
            }
        }
    }
    std::sort(forms.begin(), forms.end());
    return forms;
}

/// Partitions the reduced forms of discriminant D into rho-cycles.
inline std::vector<std::vector<quadratic_form>> indefinite_cycles(i64 D)
{
    const auto forms = reduced_indefinite_forms(D);
    std::vector<bool> seen(forms.size(), false);
    const auto index_of = [&](const quadratic_form& f) -> std::size_t {
        const auto it = std::lower_bound(forms.begin(), forms.end(), f);
        if (it == forms.end() || *it != f) {
            throw std::logic_error("rho left the set of reduced forms");
        }
        return static_cast<std::size_t>(it - forms.begin());
    };
    std::vector<std::vector<quadratic_form>> cycles;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (seen[i]) {
            continue;
        }
        std::vector<quadratic_form> cycle;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            cycle.push_back(forms[j]);
            j = index_of(rho(forms[j], D));
        }
        if (j != i) {
            throw std::logic_error("rho orbit did not close on its starting form");
        }
        cycles.push_back(std::move(cycle));
    }
    return cycles;
}

/// Narrow class number h+(D) as the number of rho-cycles.
inline class_number_result class_number_real_narrow(i64 D)
{
    require_positive_fundamental(D, "class_number_real_narrow");
    return {D, indefinite_cycles(D).size(), class_number_kind::real_narrow};
}

/// Fundamental unit data of the maximal order of discriminant D > 0.
struct fundamental_unit {
    double regulator = 0.0;  // log(eps), eps > 1
    int norm = 1;            // N(eps) = (-1)^period
    std::size_t period = 0;
};

/// Continued fraction of ((D mod 2) + sqrt(D))/2 with the exact (P, Q)
/// recurrence; the period ends at the first repeated state. The fundamental
/// unit is the product of the complete quotients over one period, so the
/// regulator is the sum of their logarithms.
inline fundamental_unit real_quadratic_unit(i64 D)
{
    if (D <= 0 || is_perfect_square(static_cast<u64>(D)) || (mod_floor(D, 4) != 0 && mod_floor(D, 4) != 1)) {
        throw std::domain_error("real_quadratic_unit: D must be a positive nonsquare discriminant");
    }
    const i64 s = static_cast<i64>(isqrt(static_cast<u64>(D)));
    const double root = std::sqrt(static_cast<double>(D));
    i64 p = D % 2;
    i64 q = 2;
    std::unordered_map<u64, std::size_t> first_seen;
    std::vector<double> logs;
    const auto key = [](i64 pp, i64 qq) {
        return (static_cast<u64>(static_cast<std::uint32_t>(pp)) << 32) | static_cast<std::uint32_t>(qq);
    };
    for (std::size_t k = 0;; ++k) {
        const auto [it, fresh] = first_seen.try_emplace(key(p, q), k);
        if (!fresh) {
            fundamental_unit unit;
            unit.period = k - it->second;
            for (std::size_t i = it->second; i < k; ++i) {
                unit.regulator += logs[i];
            }
            unit.norm = unit.period % 2 == 0 ? 1 : -1;
            return unit;
        }
        // floor((p + sqrt(D)) / q); sqrt(D) is irrational so p + s stands in for it.
        const i64 a = q > 0 ? detail::floor_div(p + s, q) : detail::floor_div(p + s + 1, q);
        logs.push_back(std::log((static_cast<double>(p) + root) / static_cast<double>(q)));
        p = a * q - p;
        q = (D - p * p) / q;
    }
}

/// h(D) = h+(D) if the fundamental unit has norm -1, else h+(D)/2.
inline u64 class_number_real_wide(i64 D)
{
    const u64 narrow = class_number_real_narrow(D).count;
    return real_quadratic_unit(D).norm == -1 ? narrow : narrow / 2;
}

/// 3 | h(Q(sqrt(d))) for squarefree d >= 2, decided on the narrow class number.
inline bool three_divides_real_class_number(u64 d)
{
    if (d < 2 || !is_squarefree(d)) {
        throw std::domain_error("three_divides_real_class_number: d must be squarefree and >= 2");
    }
    return class_number_real_narrow(fundamental_discriminant(static_cast<i64>(d))).count % 3 == 0;
}

// ---------------------------------------------------------------------------
// Analytic cross-check

/// Kronecker symbol (a/n) for n >= 1.
inline int kronecker(i64 a, u64 n)
{
    if (n == 0) {
        return (a == 1 || a == -1) ? 1 : 0;
    }
    int k = 1;
    if (n % 2 == 0) {
        if (a % 2 == 0) {
            return 0;
        }
        // (a/2) = 1 if a = +-1 (mod 8), -1 if a = +-3 (mod 8)
        const int a8 = static_cast<int>(mod_floor(a, 8));
        const int two = (a8 == 1 || a8 == 7) ? 1 : -1;
        while (n % 2 == 0) {
            n /= 2;
            k *= two;
        }
    }
    // Jacobi symbol, n odd.
    if (n > static_cast<u64>(INT64_MAX)) {
        throw std::domain_error("kronecker: modulus out of range");
    }
    u64 x = static_cast<u64>(mod_floor(a, static_cast<i64>(n)));
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            const u64 r = n % 8;
            if (r == 3 || r == 5) {
                k = -k;
            }
        }
        std::swap(x, n);
        if (x % 4 == 3 && n % 4 == 3) {
            k = -k;
        }
        x %= n;
    }
    return n == 1 ? k : 0;
}

struct analytic_estimate {
    double value = 0.0;      // sqrt(D) L(1, chi_D) / (2 R)
    double l_value = 0.0;    // truncated sum of chi_D(n)/n, n <= cutoff
    double regulator = 0.0;
    int unit_norm = 1;
    /// Cutoff below 1000, or halving the cutoff moves the estimate by 0.25 or more.
    bool unstable = false;
};

/// Analytic class number formula with L(1, chi_D) truncated at `cutoff`.
/// With norm(eps) = -1 the value approximates h = h+, otherwise h = h+/2.
inline analytic_estimate analytic_estimate_real(i64 D, u64 cutoff)
{
    require_positive_fundamental(D, "analytic_estimate_real");
    if (cutoff == 0) {
        throw std::domain_error("analytic_estimate_real: cutoff must be positive");
    }
    // chi_D is periodic mod D for fundamental D.
    std::vector<signed char> chi(static_cast<std::size_t>(D));
    for (i64 r = 0; r < D; ++r) {
        chi[static_cast<std::size_t>(r)] = static_cast<signed char>(r == 0 ? 0 : kronecker(D, static_cast<u64>(r)));
    }
    double sum = 0.0;
    double half_sum = 0.0;
    const u64 half = cutoff / 2;
    std::size_t r = 0;
    for (u64 n = 1; n <= cutoff; ++n) {
        if (++r == chi.size()) {
            r = 0;
        }
        if (chi[r] != 0) {
            sum += chi[r] / static_cast<double>(n);
        }
        if (n == half) {
            half_sum = sum;
        }
    }
    const fundamental_unit unit = real_quadratic_unit(D);
    const double scale = std::sqrt(static_cast<double>(D)) / (2.0 * unit.regulator);
    analytic_estimate est;
    est.l_value = sum;
    est.regulator = unit.regulator;
    est.unit_norm = unit.norm;
    est.value = scale * sum;
    est.unstable = cutoff < 1000 || std::abs(scale * (sum - half_sum)) >= 0.25;
    return est;
}

/// True if the estimate is within 0.5 of h+ or of h+/2.
inline bool analytic_matches_narrow(double estimate, u64 narrow)
{
    const double h = static_cast<double>(narrow);
    return std::abs(estimate - h) <= 0.5 || std::abs(estimate - h / 2.0) <= 0.5;
}

}  // namespace ccs
