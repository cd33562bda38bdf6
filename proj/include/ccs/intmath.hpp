// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file
/// Exact integer kernels: gcd, integer roots, squarefree decomposition,
/// rational-root tests for depressed cubics and fundamental discriminants.
///
/// Everything here is a pure function of its arguments.

#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace ccs {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

template <class T>
concept unsigned_word = std::same_as<T, std::uint32_t> || std::same_as<T, std::uint64_t> ||
                        std::same_as<T, u128> || std::same_as<T, unsigned long long>;

/// t = square_part^2 * squarefree_part, squarefree_part squarefree.
struct squarefree_decomposition {
    u64 original = 1;
    u64 square_part = 1;
    u64 squarefree_part = 1;

    friend bool operator==(const squarefree_decomposition&, const squarefree_decomposition&) = default;
};

template <unsigned_word T>
constexpr T gcd(T a, T b)
{
    if (a == 0 && b == 0) {
        throw std::domain_error("gcd(0, 0) is undefined");
    }
    while (b != 0) {
        T r = a % b;
        a = b;
        b = r;
    }
    return a;
}

/// Largest r with r*r <= t.
template <unsigned_word T>
constexpr T isqrt(T t)
{
    if (t < 2) {
        return t;
    }
    int bits = 0;
    for (T s = t; s != 0; s >>= 1) {
        ++bits;
    }
    // Newton from above 2^ceil(bits/2) > sqrt(t); the iterates decrease to floor(sqrt(t)).
    T x = T(1) << ((bits + 1) / 2);
    for (;;) {
        T y = (x + t / x) / 2;
        if (y >= x) {
            return x;
        }
        x = y;
    }
}

/// Smallest r with r*r >= t.
template <unsigned_word T>
constexpr T ceil_sqrt(T t)
{
    T r = isqrt(t);
    return r * r == t ? r : r + 1;
}

/// Largest r with r^3 <= t.
constexpr u128 icbrt(u128 t)
{
    u128 lo = 0;
    u128 hi = u128(1) << 43;  // (2^43)^3 = 2^129 > any u128
    while (hi - lo > 1) {
        const u128 mid = lo + (hi - lo) / 2;
        if (mid * mid * mid <= t) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

template <unsigned_word T>
constexpr bool is_perfect_square(T t)
{
    const T r = isqrt(t);
    return r * r == t;
}

/// Primes p <= limit, ascending (sieve of Eratosthenes).
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit)
{
    std::vector<std::uint32_t> primes;
    if (limit < 2) {
        return primes;
    }
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (u64 p = 2; p <= limit; ++p) {
        if (composite[p]) {
            continue;
        }
        primes.push_back(static_cast<std::uint32_t>(p));
        for (u64 q = p * p; q <= limit; q += p) {
            composite[q] = true;
        }
    }
    return primes;
}

/// Primes up to `limit`, remembering the limit itself.
struct prime_table {
    std::uint32_t limit = 1;
    std::vector<std::uint32_t> primes;

    explicit prime_table(std::uint32_t lim) : limit(lim), primes(primes_up_to(lim)) {}
};

/// Prime table long enough for squarefree_decompose of any t <= t_max.
inline prime_table primes_for_decomposition(u64 t_max)
{
    return prime_table(static_cast<std::uint32_t>(icbrt(t_max) + 1));
}

/// Splits t = u^2 * d with d squarefree.
///
/// Trial division runs while p^3 <= cofactor. What is left then has at most
/// two prime factors, all larger than the last divisor tried, so it is either
/// squarefree or the square of a prime. Throws std::out_of_range if the table
/// ends before that point is reached.
inline squarefree_decomposition squarefree_decompose(u64 t, const prime_table& table)
{
    if (t == 0) {
        throw std::domain_error("squarefree_decompose: t must be positive");
    }
    u64 rest = t;
    u64 square = 1;
    u64 free = 1;
    bool exhausted = true;
    for (const std::uint32_t p32 : table.primes) {
        const u64 p = p32;
        if (u128(p) * p * p > rest) {
            exhausted = false;
            break;
        }
        if (rest % p != 0) {
            continue;
        }
        int e = 0;
        do {
            rest /= p;
            ++e;
        } while (rest % p == 0);
        for (int i = 0; i < e / 2; ++i) {
            square *= p;
        }
        if (e % 2 == 1) {
            free *= p;
        }
    }
    if (exhausted && rest > 1) {
        const u128 next = u128(table.limit) + 1;
        if (next * next * next <= rest) {
            throw std::out_of_range("squarefree_decompose: prime table too short for t");
        }
    }
    const u64 r = isqrt(rest);
    if (rest > 1 && r * r == rest) {
        square *= r;
    } else {
        free *= rest;
    }
    return {t, square, free};
}

inline squarefree_decomposition squarefree_decompose(u64 t)
{
    if (t == 0) {
        throw std::domain_error("squarefree_decompose: t must be positive");
    }
    const auto primes = primes_for_decomposition(t);
    return squarefree_decompose(t, primes);
}

inline bool is_squarefree(u64 t)
{
    if (t == 0) {
        return false;
    }
    return squarefree_decompose(t).square_part == 1;
}

/// Squarefree test for a signed integer; the sign is ignored.
inline bool is_squarefree(i64 t)
{
    const u64 mag = t < 0 ? u64(0) - u64(t) : u64(t);
    return is_squarefree(mag);
}

/// True iff X^3 - m X + n has an integer root.
///
/// Any integer root divides n, so only the divisors of n (both signs) are tried.
inline bool cubic_has_integer_root(u64 m, u64 n)
{
    if (m == 0 || n == 0) {
        throw std::domain_error("cubic_has_integer_root: m and n must be positive");
    }
    const auto is_root = [&](i128 r) {
        return r * r * r - i128(m) * r + i128(n) == 0;
    };
    const auto try_divisor = [&](u64 r) {
        return is_root(i128(r)) || is_root(-i128(r));
    };
    for (u64 q = 1; q * q <= n; ++q) {
        if (n % q != 0) {
            continue;
        }
        if (try_divisor(q) || try_divisor(n / q)) {
            return true;
        }
    }
    return false;
}

/// m = 1 (mod 3) and 3 does not divide n. Then X^3 - mX + n = n != 0 (mod 3)
/// for every X because X^3 = X (mod 3), so no integer root exists.
/// A false answer says nothing.
constexpr bool mod3_shortcut_no_root(u64 m, u64 n)
{
    return m % 3 == 1 && n % 3 != 0;
}

/// Non-negative residue of a modulo m (m > 0).
constexpr i64 mod_floor(i64 a, i64 m)
{
    const i64 r = a % m;
    return r < 0 ? r + m : r;
}

/// Discriminant of Q(sqrt(d)) for squarefree d not in {0, 1}.
inline i64 fundamental_discriminant(i64 d)
{
    if (d == 0 || d == 1) {
        throw std::domain_error("fundamental_discriminant: d must not be 0 or 1");
    }
    if (!is_squarefree(d)) {
        throw std::domain_error("fundamental_discriminant: d must be squarefree");
    }
    return mod_floor(d, 4) == 1 ? d : 4 * d;
}

}  // namespace ccs
