#include <gtest/gtest.h>

#include "support.hpp"

using namespace sg2;
using model64 = finite_model<std::int64_t>;

namespace {

bool has_axiom(const std::vector<axiom_instance>& cat, const std::string& name) {
    for (const auto& i : cat)
        if (i.name == name) return true;
    return false;
}

std::set<int> failed_axioms(const axiom_report& rep) {
    std::set<int> out;
    for (const auto* o : rep.failures(theory::ons)) out.insert(o->axiom);
    return out;
}

} // namespace

TEST(Axioms, CatalogCoversEveryAxiom) {
    auto cat = axiom_catalog();
    std::set<int> numbers;
    for (const auto& i : cat)
        if (i.family == theory::ons) numbers.insert(i.axiom);
    for (int k = 1; k <= 11; ++k) EXPECT_TRUE(numbers.count(k)) << "axiom " << k;
    EXPECT_TRUE(has_axiom(cat, "8-uniqueness"));
    EXPECT_TRUE(has_axiom(cat, "7-interval-a"));
    EXPECT_TRUE(has_axiom(cat, "3-conductor"));
    EXPECT_TRUE(has_axiom(cat, "lons-unit"));
}

TEST(Axioms, CapsControlSchemeSize) {
    auto count = [](long cap, const std::string& name) {
        std::size_t c = 0;
        for (const auto& i : axiom_catalog({cap, cap, cap}))
            if (i.name == name) ++c;
        return c;
    };
    EXPECT_EQ(count(8, "lons-unit"), 8u);
    EXPECT_EQ(count(4, "lons-unit"), 4u);
    EXPECT_LT(count(4, "11-residue"), count(8, "11-residue"));
}

TEST(Axioms, FourSevenPassesEverything) {
    auto rep = check_axioms(semigroup64(4, 7));
    EXPECT_EQ(rep.universe_bound, 84);
    EXPECT_TRUE(rep.all_passed(theory::ons));
    for (const auto& o : rep.outcomes)
        if (o.family == theory::ons) EXPECT_TRUE(o.undefined.empty()) << o.name;
    // T_lons fails once k reaches a
    EXPECT_EQ(rep.least_failing_lons(), 4);
}

TEST(Axioms, FiveSevenFailsUnitInstanceAtA) {
    auto rep = check_axioms(semigroup64(5, 7));
    EXPECT_TRUE(rep.all_passed(theory::ons));
    EXPECT_EQ(rep.least_failing_lons(), 5);
    // a + k*alpha1 > k*beta1 iff k < a
    for (const auto& o : rep.outcomes)
        if (o.family == theory::lons) EXPECT_EQ(o.passed(), o.params[0] < 5);
}

TEST(Axioms, ReportIsOrdered) {
    auto rep = check_axioms(semigroup64(3, 5), {std::nullopt, std::nullopt, {4, 4, 4}});
    for (std::size_t i = 1; i < rep.outcomes.size(); ++i) {
        const auto &x = rep.outcomes[i - 1], &y = rep.outcomes[i];
        if (x.axiom == y.axiom) {
            EXPECT_TRUE(x.name < y.name || (x.name == y.name && x.params < y.params));
        } else {
            EXPECT_TRUE(y.axiom == 0 || (x.axiom != 0 && x.axiom < y.axiom));
        }
    }
}

TEST(Axioms, MisassignedBeta1FailsConstantDefinitions) {
    semigroup64 s(4, 7);
    auto table = constant_table<std::int64_t>::canonical(s);
    table.beta1 = 14;
    auto rep = check_axioms(model64(s, table));
    EXPECT_TRUE(failed_axioms(rep).count(2));
    bool named = false;
    for (const auto* o : rep.failures(theory::ons)) named |= o->name == "2-alpha1-beta1";
    EXPECT_TRUE(named);
}

TEST(Axioms, EverySingleConstantMutationIsCaught) {
    for (auto [a, b] : std::vector<std::pair<long, long>>{{4, 7}, {5, 12}, {7, 9}}) {
        semigroup64 s(a, b);
        for (auto k : {constant_kind::a, constant_kind::b, constant_kind::ab, constant_kind::c, constant_kind::alpha1,
                       constant_kind::beta1}) {
            for (std::int64_t delta : {-1, 1, 2}) {
                auto table = constant_table<std::int64_t>::canonical(s);
                table[k] += delta;
                if (table[k] < 0) continue;
                auto rep = check_axioms(model64(s, table));
                EXPECT_FALSE(rep.all_passed(theory::ons))
                    << a << "," << b << " constant " << static_cast<int>(k) << " shifted by " << delta;
            }
        }
    }
}

TEST(Axioms, CounterexamplesNameTheFailingTuple) {
    semigroup64 s(4, 7);
    auto table = constant_table<std::int64_t>::canonical(s);
    table.c = 17;
    auto rep = check_axioms(model64(s, table));
    bool found = false;
    for (const auto* o : rep.failures(theory::ons))
        if (!o->counterexample.empty()) found = true;
    EXPECT_TRUE(found);
}

TEST(Axioms, RandomPairsPassTons) {
    sg2::testing::rng r(77);
    for (int t = 0; t < 6; ++t) {
        auto [a, b] = sg2::testing::coprime_pair(r, 2, 60);
        auto rep = check_axioms(semigroup64(a, b));
        EXPECT_TRUE(rep.all_passed(theory::ons)) << a << "," << b;
        EXPECT_EQ(rep.least_failing_lons(), a <= 8 ? std::optional<long>(a) : std::nullopt);
    }
}

TEST(Axioms, Axiom12WitnessesAreConstructive) {
    for (long a = 2; a <= 12; ++a)
        for (long b = a + 1; b <= 12; ++b) {
            if (std::gcd(a, b) != 1) continue;
            semigroup64 s(a, b);
            for (long n = 1; n <= 4; ++n)
                for (long beta = 0; beta <= a * b; beta += b)
                    for (long alpha = 0; alpha <= beta; alpha += a) {
                        if ((beta - alpha) % n != 0) continue;
                        auto w = s.axiom12_witness(beta, alpha, n);
                        ASSERT_TRUE(w) << a << "," << b << " " << beta << "," << alpha << " n=" << n;
                        EXPECT_TRUE(s.is_mb(w->first));
                        EXPECT_TRUE(s.is_ma(w->second));
                        EXPECT_EQ(beta - alpha, n * (w->first - w->second));
                        if (beta - alpha < n * a) EXPECT_EQ(w->second, s.alpha(w->first));
                    }
        }
}
