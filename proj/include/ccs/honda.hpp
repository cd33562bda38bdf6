// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Witnesses (n, u, m, d) of 27 n^2 + d u^2 = 4 m^3 with gcd(m, 3n) = 1 and
/// X^3 - mX + n irreducible over Z. Each one certifies 3 | h(Q(sqrt(d))).
///
/// The enumerator sweeps (m, n) pairs, sets t = 4m^3 - 27n^2 and reads u and
/// d off the squarefree decomposition t = u^2 d, so u is never looped over.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <span>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ccs/errors.hpp"
#include "ccs/intmath.hpp"
#include "ccs/parallel.hpp"

namespace ccs {

struct honda_witness {
    u64 n = 0;
    u64 u = 0;
    u64 m = 0;
    u64 d = 0;

    friend bool operator==(const honda_witness&, const honda_witness&) = default;
};

/// Orders witnesses by (m, n, u); the least one is the canonical representative.
inline bool canonical_less(const honda_witness& a, const honda_witness& b)
{
    return std::tie(a.m, a.n, a.u) < std::tie(b.m, b.n, b.u);
}

struct witnessed_discriminant {
    u64 d = 0;
    honda_witness witness;

    friend bool operator==(const witnessed_discriminant&, const witnessed_discriminant&) = default;
};

/// First condition a candidate tuple fails.
enum class rejection { identity, gcd, cubic_root, squarefree };

inline std::string_view to_string(rejection r)
{
    switch (r) {
    case rejection::identity: return "identity";
    case rejection::gcd: return "gcd";
    case rejection::cubic_root: return "cubic-root";
    case rejection::squarefree: return "squarefree";
    }
    return "unknown";
}

using validation_result = std::variant<honda_witness, rejection>;

/// Search box for enumerate_discriminants.
///
/// The box is {1 <= n <= n_max, 1 <= u <= u_cap}. For a bound X the m range
/// follows from it: 4m^3 <= X u_cap^2 + 27 n_max^2, since beyond that every
/// t = 4m^3 - 27n^2 exceeds X u_cap^2. The default box is sized for X up to 10^6.
struct enum_config {
    u64 n_max = 200'000;
    u64 u_cap = 10;
    unsigned workers = 1;
    /// Restrict to m = 1 (mod 3), 3 does not divide n.
    bool shortcut_only = false;
};

/// Largest t = d u^2 the enumerator will factor.
inline constexpr u64 max_enumeration_t = 4'000'000'000'000'000'000ULL;

/// Bounds resolved from (X, config) before a sweep.
struct enumeration_box {
    u64 x = 0;
    u64 n_max = 0;
    u64 u_cap = 0;
    u64 t_max = 0;  // X * u_cap^2
    u64 m_max = 0;
    bool shortcut_only = false;
};

/// 4 m^3 with overflow detection. Throws std::range_error past 128 bits.
inline u128 four_m_cubed(u64 m)
{
    u128 m3 = 0;
    if (__builtin_mul_overflow(u128(m) * m, u128(m), &m3) || m3 > (~u128(0)) / 4) {
        throw std::range_error("4m^3 overflows 128 bits");
    }
    return 4 * m3;
}

/// (u, d) with 4m^3 - 27n^2 = d u^2, or nothing when 4m^3 - 27n^2 <= 1.
inline std::optional<squarefree_decomposition> candidate_from_pair(u64 m, u64 n)
{
    if (m == 0 || n == 0) {
        throw std::domain_error("candidate_from_pair: m and n must be positive");
    }
    const u128 lhs = four_m_cubed(m);
    const u128 rhs = 27 * (u128(n) * n);
    if (lhs <= rhs + 1) {
        return std::nullopt;
    }
    const u128 t = lhs - rhs;
    if (t > u128(~u64(0))) {
        throw std::range_error("candidate_from_pair: 4m^3 - 27n^2 exceeds 64 bits");
    }
    return squarefree_decompose(static_cast<u64>(t));
}

inline validation_result validate_witness(u64 n, u64 u, u64 m, u64 d)
{
    if (n == 0 || u == 0 || m == 0 || d == 0) {
        return rejection::identity;
    }
    {
        u128 n2 = u128(n) * n;
        u128 u2 = u128(u) * u;
        u128 lhs_n = 0;
        u128 lhs_d = 0;
        u128 lhs = 0;
        u128 m3 = 0;
        const bool lhs_over = __builtin_mul_overflow(n2, u128(27), &lhs_n) ||
                              __builtin_mul_overflow(u2, u128(d), &lhs_d) ||
                              __builtin_add_overflow(lhs_n, lhs_d, &lhs);
        const bool rhs_over = __builtin_mul_overflow(u128(m) * m, u128(m), &m3) || m3 > (~u128(0)) / 4;
        if (lhs_over && rhs_over) {
            throw std::range_error("validate_witness: both sides of the identity overflow 128 bits");
        }
        if (lhs_over || rhs_over || lhs != 4 * m3) {
            return rejection::identity;
        }
    }
    if (gcd<u128>(m, 3 * u128(n)) != 1) {
        return rejection::gcd;
    }
    if (cubic_has_integer_root(m, n)) {
        return rejection::cubic_root;
    }
    if (d < 2 || !is_squarefree(d)) {
        return rejection::squarefree;
    }
    return honda_witness{n, u, m, d};
}

/// Resolves the m range for bound X. Throws config_error when the box
/// would leave the 128-bit / factorable range.
inline enumeration_box plan_box(u64 x, const enum_config& config)
{
    if (x < 2) {
        throw config_error("enumeration bound X must be at least 2");
    }
    if (config.n_max == 0 || config.u_cap == 0) {
        throw config_error("search box needs n_max >= 1 and u_cap >= 1");
    }
    u128 t_max = u128(x) * config.u_cap;
    if (t_max > max_enumeration_t || (t_max *= config.u_cap) > max_enumeration_t) {
        throw config_error("X * u_cap^2 exceeds the factorable range of 4e18");
    }
    const u128 n_term = 27 * (u128(config.n_max) * config.n_max);
    const u128 bound = t_max + n_term;
    if (n_term > (u128(1) << 100)) {
        throw config_error("27 n_max^2 exceeds 2^100");
    }
    enumeration_box box;
    box.x = x;
    box.n_max = config.n_max;
    box.u_cap = config.u_cap;
    box.t_max = static_cast<u64>(t_max);
    box.m_max = static_cast<u64>(icbrt(bound / 4));
    box.shortcut_only = config.shortcut_only;
    return box;
}

using witness_map = std::unordered_map<u64, honda_witness>;

/// Keeps the canonical witness per d.
inline void offer_witness(witness_map& into, const honda_witness& w)
{
    auto [it, inserted] = into.try_emplace(w.d, w);
    if (!inserted && canonical_less(w, it->second)) {
        it->second = w;
    }
}

/// Sweeps m in [m_lo, m_hi] of the box. `primes` must cover cbrt(box.t_max).
inline void sweep_m_range(const enumeration_box& box, u64 m_lo, u64 m_hi,
                          const prime_table& primes, witness_map& out)
{
    m_lo = std::max<u64>(m_lo, 2);
    m_hi = std::min(m_hi, box.m_max);
    for (u64 m = m_lo; m <= m_hi; ++m) {
        if (m % 3 == 0) {
            continue;  // gcd(m, 3n) > 1
        }
        if (box.shortcut_only && m % 3 != 1) {
            continue;
        }
        const u128 f = four_m_cubed(m);
        if (f < 27 + 2) {
            continue;
        }
        // 2 <= t = f - 27 n^2 <= t_max
        u64 n_hi = static_cast<u64>(isqrt<u128>((f - 2) / 27));
        n_hi = std::min(n_hi, box.n_max);
        u64 n_lo = 1;
        if (f > box.t_max) {
            const u128 need = f - box.t_max;
            n_lo = std::max<u64>(1, static_cast<u64>(ceil_sqrt<u128>((need + 26) / 27)));
        }
        for (u64 n = n_lo; n <= n_hi; ++n) {
            if (box.shortcut_only && n % 3 == 0) {
                continue;
            }
            if (gcd(m, n) != 1) {
                continue;
            }
            const u64 t = static_cast<u64>(f - 27 * (u128(n) * n));
            const auto dec = squarefree_decompose(t, primes);
            if (dec.square_part > box.u_cap || dec.squarefree_part > box.x || dec.squarefree_part < 2) {
                continue;
            }
            if (!mod3_shortcut_no_root(m, n) && cubic_has_integer_root(m, n)) {
                continue;
            }
            offer_witness(out, honda_witness{n, dec.square_part, m, dec.squarefree_part});
        }
    }
}

/// Merges per-worker maps into the sorted canonical list.
inline std::vector<witnessed_discriminant> merge_partials(std::span<const witness_map> partials)
{
    witness_map all;
    for (const auto& part : partials) {
        for (const auto& [d, w] : part) {
            offer_witness(all, w);
        }
    }
    std::vector<witnessed_discriminant> result;
    result.reserve(all.size());
    for (const auto& [d, w] : all) {
        result.push_back({d, w});
    }
    std::sort(result.begin(), result.end(),
              [](const witnessed_discriminant& a, const witnessed_discriminant& b) { return a.d < b.d; });
    return result;
}

/// Every squarefree d in [2, X] having a witness inside the configured box,
/// sorted by d, each with its canonical witness. The output does not depend
/// on config.workers.
inline std::vector<witnessed_discriminant> enumerate_discriminants(u64 x, const enum_config& config = {})
{
    const enumeration_box box = plan_box(x, config);
    const auto primes = primes_for_decomposition(box.t_max);
    const unsigned workers = std::max(1u, config.workers);
    std::vector<witness_map> partials(workers);
    detail::parallel_blocks(2, box.m_max, 64, workers, [&](unsigned w, u64 lo, u64 hi) {
        sweep_m_range(box, lo, hi, primes, partials[w]);
    });
    return merge_partials(partials);
}

// ---------------------------------------------------------------------------
// witnesses.csv: header `d,m,n,u`, ascending d, LF line endings.

inline void write_witness_csv(std::ostream& out, std::span<const witnessed_discriminant> rows)
{
    out << "d,m,n,u\n";
    for (const auto& row : rows) {
        out << row.d << ',' << row.witness.m << ',' << row.witness.n << ',' << row.witness.u << '\n';
    }
}

/// One parsed row of witnesses.csv with its source text.
struct witness_row {
    std::size_t line = 0;
    std::string text;
    honda_witness witness;
};

/// Parses witnesses.csv. Throws std::runtime_error on a bad header or a row
/// that is not four unsigned decimal integers.
inline std::vector<witness_row> read_witness_csv(std::istream& in)
{
    std::vector<witness_row> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != "d,m,n,u") {
                throw std::runtime_error("witness file: expected header 'd,m,n,u', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        u64 fields[4] = {};
        std::size_t pos = 0;
        for (int i = 0; i < 4; ++i) {
            const std::size_t end = i < 3 ? line.find(',', pos) : line.size();
            if (end == std::string::npos || end == pos) {
                throw std::runtime_error("witness file line " + std::to_string(lineno) + ": malformed row '" + line + "'");
            }
            const std::string_view field(line.data() + pos, end - pos);
            u64 v = 0;
            for (const char c : field) {
                if (c < '0' || c > '9' || v > (~u64(0) - 9) / 10) {
                    throw std::runtime_error("witness file line " + std::to_string(lineno) + ": bad integer in '" + line + "'");
                }
                v = v * 10 + u64(c - '0');
            }
            fields[i] = v;
            pos = end + 1;
        }
        if (pos <= line.size()) {
            throw std::runtime_error("witness file line " + std::to_string(lineno) + ": too many fields in '" + line + "'");
        }
        rows.push_back({lineno, line, honda_witness{fields[2], fields[3], fields[1], fields[0]}});
    }
    if (!header_seen && !rows.empty()) {
        throw std::runtime_error("witness file: missing header");
    }
    return rows;
}

}  // namespace ccs
