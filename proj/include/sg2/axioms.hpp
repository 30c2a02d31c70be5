#pragma once

// Executable catalog of the axioms for ordered two-generator semigroups and a
// bounded model checker over finite semigroups.
//
// Every axiom is a sentence of the s-expression grammar in syntax.hpp. Three
// bound variables are supplied by the checker:
//   U  universe bound; universal quantifiers range over members <= U
//   W  witness bound U + n_max*ab for existential quantifiers
//   L  sample bound for the binary and ternary algebraic laws (commutativity,
//      associativity, order translation, subtraction windows), which would be
//      quadratic or cubic in U otherwise
//
// Conventions that differ from a literal reading:
//  * "x + 1" is written (- (+ x (succ 1 c)) c), i.e. adding the unit as the
//    difference succ(c) - c, which is a first-order term.
//  * ab is defined as the least positive element with an a-predecessor that
//    has no b-predecessor and a b-predecessor that has no a-predecessor. The
//    shorter "least element with both an a- and a b-predecessor" would pick
//    out a + b instead.
//  * The conductor axiom uses distance >= c (the form in the definition of c)
//    rather than > c.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sg2/eval.hpp"
#include "sg2/finite_model.hpp"
#include "sg2/semigroup.hpp"
#include "sg2/syntax.hpp"

namespace sg2 {

enum class theory { ons, lons };

struct axiom_instance {
    std::string name;          // e.g. "5-ra-definition"
    int axiom = 0;             // axiom number, 0 for the T_lons family
    theory family = theory::ons;
    std::vector<long> params;  // (n), (n, r), (n, i, j) or (k)
    formula_ptr body;
};

struct scheme_caps {
    long n = 8; // largest modulus
    long r = 8; // residues range over r < min(n, r cap + 1)
    long k = 8; // largest T_lons multiplier
};

namespace detail {

inline std::string substitute(std::string text, const std::map<std::string, long>& values) {
    for (const auto& [key, v] : values) {
        std::string pat = "{" + key + "}";
        for (std::size_t pos; (pos = text.find(pat)) != std::string::npos;)
            text.replace(pos, pat.size(), std::to_string(v));
    }
    return text;
}

} // namespace detail

/// All instances for the given caps, in catalog order.
inline std::vector<axiom_instance> axiom_catalog(const scheme_caps& caps = {}) {
    std::vector<axiom_instance> out;
    auto add = [&](std::string name, int axiom, std::string text, std::vector<long> params = {},
                   std::map<std::string, long> values = {}) {
        out.push_back({std::move(name), axiom, theory::ons, std::move(params),
                       parse_formula(detail::substitute(std::move(text), values))});
    };

    // 1: discretely ordered abelian monoid
    add("1-commutativity", 1, "(forall (x L) (forall (y L) (= (+ x y) (+ y x))))");
    add("1-associativity", 1, "(forall (x L) (forall (y L) (forall (z L) (= (+ (+ x y) z) (+ x (+ y z))))))");
    add("1-identity", 1, "(forall (x U) (= (+ x 0) x))");
    add("1-order-least", 1, "(forall (x U) (<= 0 x))");
    add("1-order-total", 1, "(forall (x L) (forall (y L) (or (< x y) (= x y) (< y x))))");
    add("1-order-translation", 1,
        "(forall (x L) (forall (y L) (forall (z L) (implies (< x y) (< (+ x z) (+ y z))))))");
    add("1-discrete", 1,
        "(forall (x U) (and (< x (succ 1 x)) (not (exists (y W) (and (< x y) (< y (succ 1 x)))))))");
    add("1-predecessor", 1, "(forall (x U) (implies (< 0 x) (= (succ 1 (succ -1 x)) x)))");

    // 2: the constants
    add("2-a-multiplicity", 2, "(and (< 0 a) (forall (x U) (implies (< 0 x) (<= a x))))");
    add("2-b-generator", 2,
        "(and (< a b) (not (exists (y W) (= (+ y a) b)))"
        " (forall (x U) (implies (and (< 0 x) (< x b)) (exists (y W) (= (+ y a) x)))))");
    add("2-ab-definition", 2,
        "(and (exists (y W) (and (= (+ y a) ab) (not (exists (w W) (= (+ w b) y)))))"
        " (exists (z W) (and (= (+ z b) ab) (not (exists (w W) (= (+ w a) z)))))"
        " (forall (x U) (implies (and (< 0 x) (< x ab))"
        "  (not (and (exists (y W) (and (= (+ y a) x) (not (exists (w W) (= (+ w b) y)))))"
        "            (exists (z W) (and (= (+ z b) x) (not (exists (w W) (= (+ w a) z))))))))))");
    add("2-ma-definition", 2, "(forall (x U) (iff (Ma x) (or (= x ab) (not (exists (y W) (= (+ y b) x))))))");
    add("2-mb-definition", 2, "(forall (x U) (iff (Mb x) (or (= x ab) (not (exists (y W) (= (+ y a) x))))))");
    add("2-alpha1-beta1", 2,
        "(and (Ma alpha1) (Mb beta1) (= (+ beta1 c) (+ alpha1 (succ 1 c)))"
        " (forall (x U) (implies (< x alpha1)"
        "  (not (and (Ma x) (exists (y W) (and (Mb y) (= (+ y c) (+ x (succ 1 c))))))))))");

    // 3: the conductor
    add("3-conductor", 3, "(= (succ 1 ab) (+ c (+ a b)))");
    add("3-subtractable", 3,
        "(forall (x L) (forall (y (+ x (+ c L))) (implies (<= (+ c x) y) (exists (z W) (= (+ z x) y)))))");
    add("3-conductor-least", 3,
        "(exists (x L) (exists (y (+ x (+ c L)))"
        " (and (<= (+ (succ -1 c) x) y) (not (exists (z W) (= (+ z x) y))))))");

    // 4: predecessors
    add("4-predecessor", 4, "(forall (x U) (implies (< 0 x) (exists (y W) (or (= (+ y a) x) (= (+ y b) x)))))");

    // 5: bounded Presburger structure on M_a and M_b
    for (long n = 2; n <= caps.n; ++n) {
        std::map<std::string, long> v{{"n", n}};
        add("5-div", 5, "(forall (x U) (implies (or (Ra {n} 0 x) (Rb {n} 0 x)) (= (* {n} (div {n} x)) x)))", {n}, v);
        for (long r = 0; r < n && r <= caps.r; ++r) {
            v["r"] = r;
            add("5-ra-definition", 5,
                "(forall (x U) (iff (Ra {n} {r} x)"
                " (and (Ma x) (exists (y W) (and (Ma y) (= x (+ (* {n} y) (* {r} a))))))))",
                {n, r}, v);
            add("5-rb-definition", 5,
                "(forall (x U) (iff (Rb {n} {r} x)"
                " (and (Mb x) (exists (y W) (and (Mb y) (= x (+ (* {n} y) (* {r} b))))))))",
                {n, r}, v);
        }
        std::string partition_a = "(forall (x U) (implies (Ma x) (and (or";
        std::string partition_b = "(forall (x U) (implies (Mb x) (and (or";
        std::string step_a = "(forall (x U) (implies (and (Ma x) (Ma (+ x a))) (and";
        std::string step_b = "(forall (x U) (implies (and (Mb x) (Mb (+ x b))) (and";
        std::string excl_a, excl_b;
        for (long i = 0; i < n; ++i) {
            std::string si = std::to_string(i), sn = std::to_string(n), s1 = std::to_string((i + 1) % n);
            partition_a += " (Ra " + sn + " " + si + " x)";
            partition_b += " (Rb " + sn + " " + si + " x)";
            step_a += " (iff (Ra " + sn + " " + si + " x) (Ra " + sn + " " + s1 + " (+ x a)))";
            step_b += " (iff (Rb " + sn + " " + si + " x) (Rb " + sn + " " + s1 + " (+ x b)))";
            for (long j = i + 1; j < n; ++j) {
                std::string sj = std::to_string(j);
                excl_a += " (not (and (Ra " + sn + " " + si + " x) (Ra " + sn + " " + sj + " x)))";
                excl_b += " (not (and (Rb " + sn + " " + si + " x) (Rb " + sn + " " + sj + " x)))";
            }
        }
        add("5-ra-partition", 5, partition_a + ")" + excl_a + ")))", {n});
        add("5-rb-partition", 5, partition_b + ")" + excl_b + ")))", {n});
        add("5-ra-step", 5, step_a + ")))", {n});
        add("5-rb-step", 5, step_b + ")))", {n});
    }

    // 6: difference on M_a and M_b
    add("6-difference-a", 6,
        "(forall (x U) (forall (y U) (implies (and (Ma x) (Ma y) (< y x)) (and (Ma (- x y)) (= (+ (- x y) y) x)))))");
    add("6-difference-b", 6,
        "(forall (x U) (forall (y U) (implies (and (Mb x) (Mb y) (< y x)) (and (Mb (- x y)) (= (+ (- x y) y) x)))))");

    // 7: intervals of length a (b) contain a multiple of a (b)
    add("7-interval-a", 7,
        "(forall (x U) (implies (< (+ x a) ab) (exists (y W) (and (Ma y) (<= x y) (< y (+ x a))))))");
    add("7-interval-b", 7,
        "(forall (x U) (implies (< (+ x b) ab) (exists (y W) (and (Mb y) (<= x y) (< y (+ x b))))))");

    // 8: unique decomposition below ab
    add("8-decomposition", 8,
        "(forall (x U) (implies (not (exists (w W) (= (+ w ab) x)))"
        " (exists (z W) (exists (y W) (and (Mb z) (<= z x) (= x (+ y z)) (Ma y))))))");
    add("8-uniqueness", 8,
        "(forall (y L) (forall (y2 L) (forall (z U) (implies (and (Ma y) (Ma y2) (< y2 y) (Mb z) (< (+ y z) ab))"
        " (not (Mb (- (+ y z) y2)))))))");

    // 9: alpha, beta, pi
    add("9-alpha", 9,
        "(forall (x ab) (and (Ma (alpha x)) (<= (alpha x) x)"
        " (not (exists (y W) (and (Ma y) (< (alpha x) y) (<= y x))))))");
    add("9-beta", 9,
        "(forall (x ab) (and (Mb (beta x)) (<= x (beta x))"
        " (not (exists (y W) (and (Mb y) (<= x y) (< y (beta x)))))))");
    for (long lvl = 0; lvl <= 2; ++lvl) {
        add("9-pi", 9,
            "(forall (x U) (implies (and (<= (* {l} ab) x) (< x (* {l1} ab)))"
            " (and (Ma (pi_a {l} x)) (Mb (pi_b {l} x)) (< (pi_a {l} x) ab) (< (pi_b {l} x) ab)"
            "  (or (= x (+ (* {l} ab) (+ (pi_a {l} x) (pi_b {l} x))))"
            "      (= (+ x ab) (+ (* {l} ab) (+ (pi_a {l} x) (pi_b {l} x))))))))",
            {lvl}, {{"l", lvl}, {"l1", lvl + 1}});
    }

    // 10: residues of the constants, successor above the conductor
    add("10-successor", 10, "(forall (x U) (implies (<= c x) (= (succ 1 x) (- (+ x beta1) alpha1))))");
    for (long n = 2; n <= caps.n; ++n) {
        std::map<std::string, long> v{{"n", n}};
        add("10-coprime", 10, "(and (implies (R {n} 0 a) (not (R {n} 0 b))) (implies (R {n} 0 b) (not (R {n} 0 a))))",
            {n}, v);
        for (long i = 0; i < n && i <= caps.r; ++i) {
            v["i"] = i;
            add("10-ra-ab", 10, "(iff (Ra {n} {i} ab) (R {n} {i} b))", {n, i}, v);
            add("10-rb-ab", 10, "(iff (Rb {n} {i} ab) (R {n} {i} a))", {n, i}, v);
            for (long j = 0; j < n && j <= caps.r; ++j) {
                v["j"] = j;
                v["ij"] = (i * j) % n;
                add("10-product", 10, "(implies (and (R {n} {i} a) (R {n} {j} b)) (R {n} {ij} ab))", {n, i, j}, v);
            }
        }
    }

    // 11: the residue predicates through their defining sentence
    for (long n = 2; n <= caps.n; ++n)
        for (long r = 0; r < n && r <= caps.r; ++r)
            add("11-residue", 11, "(forall (x U) (iff (R {n} {r} x) (exists (y W) (= (+ (* {n} ab) x) (succ {r} (* {n} y))))))",
                {n, r}, {{"n", n}, {"r", r}});

    // T_lons: a is larger than every finite multiple of the unit
    for (long k = 1; k <= caps.k; ++k) {
        out.push_back({"lons-unit", 0, theory::lons, {k},
                       parse_formula(detail::substitute("(< (* {k} beta1) (+ a (* {k} alpha1)))", {{"k", k}}))});
    }
    return out;
}

struct axiom_config {
    std::optional<big_int> universe_bound; // default 3ab
    std::optional<big_int> sample_bound;   // default 3b
    scheme_caps caps;
};

struct axiom_outcome {
    std::string name;
    int axiom = 0;
    theory family = theory::ons;
    std::vector<long> params;
    bool value = false;
    std::vector<undefined_event> undefined;
    /// First falsifying assignment of the leading universal variables.
    std::vector<std::pair<std::string, std::string>> counterexample;

    bool passed() const noexcept { return value && undefined.empty(); }
};

struct axiom_report {
    big_int universe_bound, witness_bound, sample_bound;
    std::vector<axiom_outcome> outcomes; // ordered by (name, params)

    bool all_passed(theory t) const {
        for (const auto& o : outcomes)
            if (o.family == t && !o.passed()) return false;
        return true;
    }

    std::vector<const axiom_outcome*> failures(theory t) const {
        std::vector<const axiom_outcome*> out;
        for (const auto& o : outcomes)
            if (o.family == t && !o.passed()) out.push_back(&o);
        return out;
    }

    /// Least k whose T_lons instance fails, if any.
    std::optional<long> least_failing_lons() const {
        for (const auto& o : outcomes)
            if (o.family == theory::lons && !o.passed()) return o.params.at(0);
        return std::nullopt;
    }
};

/// Checks every catalog instance in `model`, whose constants may differ from
/// the canonical ones.
template <integer_like Int>
axiom_report check_axioms(const finite_model<Int>& model, const axiom_config& cfg = {}) {
    const auto& s = model.semigroup();
    axiom_report rep;
    rep.universe_bound = cfg.universe_bound.value_or(3 * widen(s.ab()));
    rep.sample_bound = cfg.sample_bound.value_or(3 * widen(s.b()));
    rep.witness_bound = rep.universe_bound + big_int(cfg.caps.n) * widen(s.ab());

    evaluator<finite_model<Int>> ev(model);
    ev.bind("U", narrow<Int>(rep.universe_bound));
    ev.bind("W", narrow<Int>(rep.witness_bound));
    ev.bind("L", narrow<Int>(rep.sample_bound));

    for (auto& inst : axiom_catalog(cfg.caps)) {
        axiom_outcome o{inst.name, inst.axiom, inst.family, inst.params};
        ev.reset_undefined();
        o.value = ev.holds(*inst.body);
        o.undefined = ev.undefined_report();
        if (!o.value && inst.body->kind == formula_kind::forall) {
            if (auto cx = ev.counterexample(*inst.body))
                for (auto& [name, v] : *cx) o.counterexample.emplace_back(name, to_decimal(v));
        }
        rep.outcomes.push_back(std::move(o));
    }
    std::stable_sort(rep.outcomes.begin(), rep.outcomes.end(), [](const axiom_outcome& x, const axiom_outcome& y) {
        if (x.axiom != y.axiom) {
            // T_lons instances sort after the numbered axioms
            if (x.axiom == 0 || y.axiom == 0) return y.axiom == 0 && x.axiom != 0;
            return x.axiom < y.axiom;
        }
        if (x.name != y.name) return x.name < y.name;
        return x.params < y.params;
    });
    return rep;
}

template <integer_like Int>
axiom_report check_axioms(const basic_semigroup<Int>& s, const axiom_config& cfg = {}) {
    return check_axioms(finite_model<Int>(s), cfg);
}

} // namespace sg2
