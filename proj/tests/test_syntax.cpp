#include <gtest/gtest.h>

#include "support.hpp"

using namespace sg2;

namespace {

error_kind parse_failure(const std::string& text) {
    try {
        parse_formula(text);
    } catch (const error& e) {
        return e.kind();
    }
    return error_kind::unsupported;
}

} // namespace

TEST(Syntax, RoundTripsThroughText) {
    const std::vector<std::string> texts{
        "(and (< 0 a) (< a b) (< b ab))",
        "(= (beta (alpha (* 2 b))) (* 2 b))",
        "(or (Mb (* 2 beta1)) (Mb (- (* 2 beta1) ab)))",
        "(R 5 0 (+ a (* 2 b)))",
        "(Ra 4 1 (alpha (* 2 b)))",
        "(= (pi_b 1 (+ ab beta1)) beta1)",
        "(forall (x (* 3 ab)) (implies (Mb x) (exists (y x) (= (beta y) x))))",
        "(iff (Ma (div 2 ab)) (not (<= c 7)))",
        "(= (succ -1 c) (- c (succ 1 0)))",
    };
    for (const auto& t : texts) {
        auto f = parse_formula(t);
        EXPECT_EQ(to_sexpr(f), t);
        EXPECT_EQ(to_sexpr(parse_formula(to_sexpr(f))), to_sexpr(f));
    }
}

TEST(Syntax, TermsParseAlone) {
    EXPECT_EQ(to_sexpr(parse_term("(alpha (beta a))")), "(alpha (beta a))");
    EXPECT_EQ(to_sexpr(parse_term("  42 ")), "42");
    EXPECT_EQ(to_sexpr(parse_term("x")), "x");
}

TEST(Syntax, RejectsMalformedInput) {
    EXPECT_EQ(parse_failure("(< a"), error_kind::parse_error);
    EXPECT_EQ(parse_failure("(< a b c)"), error_kind::parse_error);
    EXPECT_EQ(parse_failure("(R 3 3 a)"), error_kind::parse_error);
    EXPECT_EQ(parse_failure("(frob a)"), error_kind::parse_error);
    EXPECT_EQ(parse_failure("(= (div 1 a) a)"), error_kind::parse_error);
    EXPECT_EQ(parse_failure("(< a b) extra"), error_kind::parse_error);
}

TEST(Syntax, FreeVariablesAndQuantifiers) {
    auto f = parse_formula("(forall (x ab) (< x (+ y z)))");
    EXPECT_EQ(free_variables(*f), (std::set<std::string>{"y", "z"}));
    EXPECT_FALSE(is_quantifier_free(*f));
    EXPECT_TRUE(is_quantifier_free(*parse_formula("(not (Ma (- b a)))")));
}

TEST(Syntax, LargestCoefficient) {
    EXPECT_EQ(max_coefficient(*parse_formula("(and (R 5 0 (* 3 a)) (< (* 8 b) ab))")), 8);
    EXPECT_EQ(max_coefficient(*parse_formula("(= (succ -12 c) (div 4 ab))")), 12);
}

TEST(Syntax, CatalogParsesWithComments) {
    auto cat = parse_catalog("; comment\n(sentence first (< a b)) ; trailing\n(sentence second (Mb b))\n");
    ASSERT_EQ(cat.size(), 2u);
    EXPECT_EQ(cat[0].name, "first");
    EXPECT_EQ(to_sexpr(cat[1].body), "(Mb b)");
    EXPECT_THROW(parse_catalog("(sentence only-name)"), error);
}

TEST(Syntax, ShippedCatalogHasThirtySentences) {
    auto cat = load_catalog(sg2::testing::catalog_path());
    EXPECT_EQ(cat.size(), 30u);
    std::set<std::string> names;
    for (const auto& s : cat) {
        EXPECT_TRUE(is_quantifier_free(*s.body)) << s.name;
        EXPECT_TRUE(free_variables(*s.body).empty()) << s.name;
        names.insert(s.name);
    }
    EXPECT_EQ(names.size(), cat.size());
}
