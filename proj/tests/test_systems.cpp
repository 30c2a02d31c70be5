#include <gtest/gtest.h>

#include "support.hpp"

using namespace sg2;

namespace {

reduced_system sys(long n, long mb, long diff, long d_lo, long d_hi, long x_lo, long x_hi,
                   std::optional<long> ma = std::nullopt) {
    reduced_system s;
    s.n = n;
    s.mb_residue = mb;
    s.diff_residue = diff;
    s.ma_residue = ma;
    s.diff_lo = endpoint::integer(d_lo);
    s.diff_hi = endpoint::integer(d_hi);
    s.x_lo = endpoint::integer(x_lo);
    s.x_hi = endpoint::integer(x_hi);
    return s;
}

/// Least x in M_b (below ab and ab itself) meeting every constraint, by
/// listing M_b and computing alpha with plain division.
std::optional<long> oracle(long a, long b, const reduced_system& s, const concrete_windows& w) {
    for (long j = 0; j <= a; ++j) {
        long x = j * b;
        long al = x == a * b ? x : x / a * a;
        long d = x - al;
        if (!(w.x_lo < x && x < w.x_hi)) continue;
        if (!(w.diff_lo < d && d < w.diff_hi)) continue;
        if (j % s.n != s.mb_residue || d % s.n != s.diff_residue) continue;
        if (s.ma_residue && (al / a) % s.n != *s.ma_residue) continue;
        return x;
    }
    return std::nullopt;
}

} // namespace

TEST(Systems, DirectExamples) {
    semigroup64 s(5, 7);
    EXPECT_EQ(solve_direct(s, sys(2, 1, 0, 1, 5, 0, 35)), 7);
    EXPECT_EQ(solve_direct(s, sys(2, 1, 1, 2, 5, 0, 35)), std::nullopt);
    EXPECT_EQ(solve_direct(s, sys(2, 0, 1, 2, 5, 0, 35)), 28);
    EXPECT_EQ(solve_direct(s, sys(5, 0, 0, -1, 6, 0, 7)), std::nullopt);
}

TEST(Systems, LambdaExamples) {
    semigroup64 s57(5, 7);
    lambda_map<std::int64_t> l57(s57);
    EXPECT_EQ(l57(3), 1);
    EXPECT_EQ(l57(0), 0);
    semigroup64 s47(4, 7);
    EXPECT_EQ(lambda_map<std::int64_t>(s47)(1), 3);
    EXPECT_EQ(solve_via_lambda(s57, sys(2, 1, 0, 1, 5, 0, 35)), 7);
    EXPECT_EQ(solve_via_lambda(s47, sys(2, 1, 1, 0, 4, 0, 28)), 7);
    // only even multiples allowed, but the window holds just b
    EXPECT_EQ(solve_via_lambda(s47, sys(2, 0, 0, -1, 5, 0, 8)), std::nullopt);
}

TEST(Systems, LambdaIsAPermutation) {
    sg2::testing::rng r(3);
    for (int t = 0; t < 30; ++t) {
        auto [a, b] = sg2::testing::coprime_pair(r, 2, 300);
        semigroup64 s(a, b);
        lambda_map<std::int64_t> l(s);
        std::vector<char> seen(a, 0);
        for (long w = 0; w < a; ++w) {
            auto v = l(w);
            ASSERT_FALSE(seen[v]);
            seen[v] = 1;
            // w*b - alpha(w*b) = lambda(w)
            EXPECT_EQ(w * b - s.alpha(w * b), v);
        }
    }
}

TEST(Systems, InvalidSystemsAreRejected) {
    semigroup64 s(5, 7);
    for (const auto& bad : {sys(0, 0, 0, 0, 1, 0, 1), sys(3, 3, 0, 0, 1, 0, 1), sys(3, 0, 0, 5, 5, 0, 9),
                            sys(3, 0, 0, 0, 4, 9, 2), sys(3, 0, 0, 0, 4, 0, 9, 4)}) {
        try {
            solve_direct(s, bad);
            ADD_FAILURE() << to_json(bad).dump();
        } catch (const error& e) {
            EXPECT_EQ(e.kind(), error_kind::invalid_system);
        }
    }
}

TEST(Systems, SolversAgreeWithOracle) {
    sg2::testing::rng r(101);
    for (int t = 0; t < 300; ++t) {
        auto [a, b] = sg2::testing::coprime_pair(r, 2, 120);
        semigroup64 s(a, b);
        auto q = sg2::testing::finite_system(r, a, b);
        auto want = oracle(a, b, q, resolve_windows(s, q));
        EXPECT_EQ(solve_direct(s, q), want) << a << "," << b << " " << to_json(q).dump();
        EXPECT_EQ(solve_via_lambda(s, q), want) << a << "," << b << " " << to_json(q).dump();
    }
}

TEST(Systems, EnlargingWindowsKeepsRealizability) {
    sg2::testing::rng r(202);
    for (int t = 0; t < 200; ++t) {
        auto [a, b] = sg2::testing::coprime_pair(r, 2, 80);
        semigroup64 s(a, b);
        auto q = sg2::testing::finite_system(r, a, b);
        if (!solve_direct(s, q)) continue;
        auto wider = q;
        wider.diff_lo = endpoint::integer(*q.diff_lo.value - r.uniform(0, 5));
        wider.diff_hi = endpoint::integer(*q.diff_hi.value + r.uniform(0, 5));
        wider.x_lo = endpoint::integer(*q.x_lo.value - r.uniform(0, 50));
        wider.x_hi = endpoint::integer(*q.x_hi.value + r.uniform(0, 50));
        EXPECT_TRUE(solve_direct(s, wider).has_value());
    }
}

TEST(Systems, FullSystemsTranslateToReducedOnes) {
    sg2::testing::rng r(303);
    int realizable = 0;
    for (int t = 0; t < 300; ++t) {
        auto [a, b] = sg2::testing::coprime_pair(r, 2, 150);
        semigroup64 s(a, b);
        auto q = sg2::testing::finite_system(r, a, b);
        q.n = r.uniform(1, 6);
        q.mb_residue = r.uniform(0, q.n - 1);
        q.diff_residue = r.uniform(0, q.n - 1);
        q.ma_residue = r.uniform(0, q.n - 1);
        auto direct = solve_direct(s, q);
        std::optional<std::int64_t> via;
        for (const auto& red : full_to_reduced(s, q)) {
            EXPECT_EQ(red.n % q.n, 0);
            if (auto x = solve_direct(s, red); x && (!via || *x < *via)) via = x;
        }
        EXPECT_EQ(direct, via) << a << "," << b << " " << to_json(q).dump();
        realizable += direct.has_value();
    }
    EXPECT_GT(realizable, 20);
}

TEST(Systems, TranslationModulusAbsorbsSharedPrimes) {
    EXPECT_EQ(translation_modulus(semigroup64(12, 35), 6), 6 * 4 * 3);
    EXPECT_EQ(translation_modulus(semigroup64(5, 7), 6), 6);
    auto red = full_to_reduced(semigroup64(4, 7), sys(2, 1, 1, -1, 5, -1, 29, 1));
    EXPECT_EQ(red.size(), 4u);
    for (const auto& x : red) EXPECT_EQ(x.n, 8);
}

TEST(Systems, SymbolicEndpointsResolvePerSemigroup) {
    reduced_system q = sys(1, 0, 0, -1, 0, -1, 0);
    q.diff_hi = endpoint::terms(parse_term("a"));
    q.x_lo = endpoint::terms(parse_term("beta1"), parse_term("b"));
    q.x_hi = endpoint::terms(parse_term("ab"));
    semigroup64 s(4, 7);
    auto w = resolve_windows(s, q);
    EXPECT_EQ(w.diff_hi, 4);
    EXPECT_EQ(w.x_lo, 14);
    EXPECT_EQ(w.x_hi, 28);
    EXPECT_EQ(solve_direct(s, q), 21);
}

TEST(Systems, JsonRoundTrip) {
    const std::string text =
        R"({"n":3,"mb_residue":1,"diff_residue":2,"ma_residue":null,"diff_window":[-1,{"hi":"a"}],"x_window":[{"hi":"beta1","lo":"b"},"ab"]})";
    auto q = system_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(q.n, 3);
    EXPECT_FALSE(q.is_full());
    EXPECT_TRUE(q.x_hi.symbolic());
    auto again = system_from_json(to_json(q));
    EXPECT_EQ(to_json(again), to_json(q));
    EXPECT_THROW(system_from_json(nlohmann::json::parse(R"({"n":3})")), error);
}
