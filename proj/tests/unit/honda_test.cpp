// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "ccs/honda.hpp"
#include "oracles.hpp"

using namespace ccs;

namespace {

const witnessed_discriminant* find_d(const std::vector<witnessed_discriminant>& ws, u64 d)
{
    for (const auto& w : ws) {
        if (w.d == d) {
            return &w;
        }
    }
    return nullptr;
}

std::set<u64> ds_of(const std::vector<witnessed_discriminant>& ws)
{
    std::set<u64> s;
    for (const auto& w : ws) {
        s.insert(w.d);
    }
    return s;
}

// Loops over (m, n, u) directly and tests every condition by scanning.
std::map<u64, honda_witness> brute_force_box(u64 x, u64 n_max, u64 u_cap, bool shortcut_only)
{
    std::map<u64, honda_witness> best;
    const u128 bound = u128(x) * u_cap * u_cap + 27 * u128(n_max) * n_max;
    for (u64 m = 1; 4 * u128(m) * m * m <= bound; ++m) {
        for (u64 n = 1; n <= n_max; ++n) {
            const i128 t = 4 * i128(m) * m * m - 27 * i128(n) * n;
            if (t <= 0) {
                break;
            }
            for (u64 u = 1; u <= u_cap; ++u) {
                if (t % (i128(u) * u) != 0) {
                    continue;
                }
                const u64 d = static_cast<u64>(t / (i128(u) * u));
                if (d < 2 || d > x || !oracle::squarefree_by_trial(d)) {
                    continue;
                }
                if (shortcut_only && !(m % 3 == 1 && n % 3 != 0)) {
                    continue;
                }
                if (oracle::gcd_scan(m, 3 * n) != 1 || oracle::cubic_root_scan(i64(m), i64(n))) {
                    continue;
                }
                const honda_witness w{n, u, m, d};
                auto it = best.find(d);
                if (it == best.end() || std::tie(m, n, u) < std::tie(it->second.m, it->second.n, it->second.u)) {
                    best[d] = w;
                }
            }
        }
    }
    return best;
}

}  // namespace

TEST(CandidateFromPair, Examples)
{
    const auto a = candidate_from_pair(4, 1);
    ASSERT_TRUE(a);
    EXPECT_EQ(a->square_part, 1u);
    EXPECT_EQ(a->squarefree_part, 229u);

    const auto b = candidate_from_pair(7, 2);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->square_part, 4u);
    EXPECT_EQ(b->squarefree_part, 79u);

    EXPECT_FALSE(candidate_from_pair(1, 1));
    // 4*8 - 27 = 5, 4*27 - 27*4 = 0
    EXPECT_TRUE(candidate_from_pair(2, 1));
    EXPECT_FALSE(candidate_from_pair(3, 2));
}

TEST(CandidateFromPair, OverflowIsRangeError)
{
    EXPECT_THROW(candidate_from_pair(u64(1) << 43, 1), std::range_error);
    EXPECT_THROW(candidate_from_pair(u64(1) << 30, 1), std::range_error);  // t > 2^64
}

TEST(ValidateWitness, Valid)
{
    const auto r = validate_witness(1, 1, 4, 229);
    ASSERT_TRUE(std::holds_alternative<honda_witness>(r));
    EXPECT_EQ(std::get<honda_witness>(r), (honda_witness{1, 1, 4, 229}));
    EXPECT_TRUE(std::holds_alternative<honda_witness>(validate_witness(2, 4, 7, 79)));
}

TEST(ValidateWitness, RejectionsNameFirstFailedCondition)
{
    EXPECT_EQ(std::get<rejection>(validate_witness(1, 1, 3, 81)), rejection::gcd);
    EXPECT_EQ(std::get<rejection>(validate_witness(6, 1, 7, 400)), rejection::cubic_root);
    EXPECT_EQ(std::get<rejection>(validate_witness(1, 1, 4, 228)), rejection::identity);
    // 4*125 - 27*4 = 392 = 2 * 14^2, but X^3 - 5X + 2 has the root 2
    EXPECT_EQ(std::get<rejection>(validate_witness(2, 14, 5, 2)), rejection::cubic_root);
    // 4*64 - 27*4 = 148 = 37 * 2^2 = 148 * 1^2; d = 148 not squarefree
    EXPECT_EQ(std::get<rejection>(validate_witness(2, 1, 4, 148)), rejection::gcd);
    // 4*343 - 27*9 = 1129 prime; 4*343 - 27*16 = 940 = 235 * 2^2 -> (u=1, d=940) not squarefree
    EXPECT_EQ(std::get<rejection>(validate_witness(4, 1, 7, 940)), rejection::squarefree);
    EXPECT_EQ(std::get<rejection>(validate_witness(0, 1, 4, 256)), rejection::identity);
}

TEST(PlanBox, OverflowIsConfigError)
{
    EXPECT_THROW(plan_box(1, enum_config{}), config_error);
    EXPECT_THROW(plan_box(1'000'000, enum_config{.n_max = 10, .u_cap = u64(1) << 32}), config_error);
    EXPECT_THROW(plan_box(1'000'000, enum_config{.n_max = u64(1) << 60, .u_cap = 1}), config_error);
    EXPECT_THROW(plan_box(1'000'000, enum_config{.n_max = 0, .u_cap = 1}), config_error);
    EXPECT_THROW(enumerate_discriminants(1'000'000, enum_config{.n_max = 10, .u_cap = u64(1) << 32}), config_error);
}

TEST(PlanBox, MMaxIsTight)
{
    const enum_config cfg{.n_max = 50, .u_cap = 3};
    const auto box = plan_box(1000, cfg);
    const u128 bound = u128(1000) * 9 + 27 * 2500;
    EXPECT_LE(4 * u128(box.m_max) * box.m_max * box.m_max, bound);
    EXPECT_GT(4 * u128(box.m_max + 1) * (box.m_max + 1) * (box.m_max + 1), bound);
}

TEST(Enumerate, KnownWitnesses)
{
    const auto at229 = enumerate_discriminants(229);
    const auto* w229 = find_d(at229, 229);
    ASSERT_NE(w229, nullptr);
    EXPECT_EQ(w229->witness, (honda_witness{1, 1, 4, 229}));

    const auto at79 = enumerate_discriminants(79);
    const auto* w79 = find_d(at79, 79);
    ASSERT_NE(w79, nullptr);
    EXPECT_EQ(w79->witness, (honda_witness{2, 4, 7, 79}));
}

TEST(Enumerate, TwoIsEmpty)
{
    EXPECT_TRUE(enumerate_discriminants(2).empty());
    EXPECT_TRUE(enumerate_discriminants(2, enum_config{.n_max = 2'000, .u_cap = 200}).empty());
}

TEST(Enumerate, MatchesBruteForceBox)
{
    for (const bool shortcut : {false, true}) {
        for (const auto& [x, n_max, u_cap] : {std::tuple<u64, u64, u64>{300, 40, 4}, {2'000, 120, 6}, {50'000, 30, 2}}) {
            const enum_config cfg{.n_max = n_max, .u_cap = u_cap, .workers = 1, .shortcut_only = shortcut};
            const auto got = enumerate_discriminants(x, cfg);
            const auto want = brute_force_box(x, n_max, u_cap, shortcut);
            ASSERT_EQ(got.size(), want.size()) << x << " " << n_max << " " << u_cap;
            for (const auto& w : got) {
                const auto it = want.find(w.d);
                ASSERT_NE(it, want.end()) << w.d;
                EXPECT_EQ(w.witness, it->second) << w.d;
            }
        }
    }
}

TEST(Enumerate, SortedAndEveryWitnessValidates)
{
    const auto ws = enumerate_discriminants(200'000);
    ASSERT_FALSE(ws.empty());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto& w = ws[i];
        if (i > 0) {
            ASSERT_LT(ws[i - 1].d, w.d);
        }
        ASSERT_EQ(w.d, w.witness.d);
        const auto r = validate_witness(w.witness.n, w.witness.u, w.witness.m, w.witness.d);
        ASSERT_TRUE(std::holds_alternative<honda_witness>(r)) << w.d;
        const i128 lhs = 27 * i128(w.witness.n) * w.witness.n + i128(w.d) * w.witness.u * w.witness.u;
        ASSERT_EQ(lhs - 4 * i128(w.witness.m) * w.witness.m * w.witness.m, 0);
    }
}

TEST(Enumerate, MonotoneInX)
{
    const enum_config cfg{.n_max = 5'000, .u_cap = 6};
    std::set<u64> previous;
    for (const u64 x : {10u, 100u, 1'000u, 10'000u, 100'000u}) {
        const auto current = ds_of(enumerate_discriminants(x, cfg));
        EXPECT_TRUE(std::includes(current.begin(), current.end(), previous.begin(), previous.end())) << x;
        previous = current;
    }
}

TEST(Enumerate, WorkerCountDoesNotChangeOutput)
{
    enum_config cfg;
    cfg.workers = 1;
    const auto one = enumerate_discriminants(300'000, cfg);
    for (const unsigned k : {2u, 8u}) {
        cfg.workers = k;
        EXPECT_EQ(enumerate_discriminants(300'000, cfg), one) << k;
    }
}

TEST(Enumerate, ContiguousPartitionMergesToSequential)
{
    const enum_config cfg{.n_max = 20'000, .u_cap = 8};
    const auto box = plan_box(100'000, cfg);
    const auto primes = primes_for_decomposition(box.t_max);
    const auto sequential = enumerate_discriminants(100'000, cfg);
    for (const u64 k : {1u, 2u, 8u}) {
        std::vector<witness_map> parts(k);
        const u64 span = (box.m_max - 1 + k - 1) / k;
        for (u64 i = 0; i < k; ++i) {
            const u64 lo = 2 + i * span;
            sweep_m_range(box, lo, lo + span - 1, primes, parts[i]);
        }
        EXPECT_EQ(merge_partials(parts), sequential) << k;
    }
}

TEST(Enumerate, ShortcutSubfamilyIsSubset)
{
    enum_config cfg;
    const auto full = ds_of(enumerate_discriminants(200'000, cfg));
    cfg.shortcut_only = true;
    const auto sub = enumerate_discriminants(200'000, cfg);
    EXPECT_FALSE(sub.empty());
    for (const auto& w : sub) {
        EXPECT_TRUE(full.count(w.d)) << w.d;
        EXPECT_EQ(w.witness.m % 3, 1u);
        EXPECT_NE(w.witness.n % 3, 0u);
    }
    EXPECT_LT(sub.size(), full.size());
}

TEST(WitnessCsv, WriteThenReadRoundTrips)
{
    const auto ws = enumerate_discriminants(5'000);
    std::stringstream buf;
    write_witness_csv(buf, ws);
    EXPECT_EQ(buf.str().substr(0, 8), "d,m,n,u\n");
    const auto rows = read_witness_csv(buf);
    ASSERT_EQ(rows.size(), ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        EXPECT_EQ(rows[i].witness, ws[i].witness);
    }
}

TEST(WitnessCsv, RowFormat)
{
    std::stringstream buf;
    const std::vector<witnessed_discriminant> ws{{229, {1, 1, 4, 229}}};
    write_witness_csv(buf, ws);
    EXPECT_EQ(buf.str(), "d,m,n,u\n229,4,1,1\n");
}

TEST(WitnessCsv, MalformedInputThrows)
{
    for (const char* text : {"d,m,n\n1,2,3\n", "d,m,n,u\n229,4,1\n", "d,m,n,u\n229,4,x,1\n", "d,m,n,u\n229,4,1,1,5\n",
                             "d,m,n,u\n-229,4,1,1\n"}) {
        std::stringstream in(text);
        EXPECT_THROW(read_witness_csv(in), std::runtime_error) << text;
    }
    std::stringstream empty("d,m,n,u\n");
    EXPECT_TRUE(read_witness_csv(empty).empty());
}
