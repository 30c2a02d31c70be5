#pragma once

// Abstract syntax for the augmented language of two-generator semigroups and
// a small s-expression reader/printer for it.
//
// Terms
//   x | 0 | a | b | ab | c | alpha1 | beta1 | <integer literal>
//   (+ t t ...)            sum
//   (- t u)                difference, defined when u <= t and t-u is a member
//   (* k t)                t added to itself k times
//   (div n t)              t/n, defined when the quotient is a member
//   (alpha t) (beta t)     defined on [0, ab]
//   (pi_a level t)         a-component of t when level*ab <= t < (level+1)*ab
//   (pi_b level t)
//   (succ i t)             i-th successor inside the semigroup (i < 0: predecessor)
//
// Formulas
//   true | false
//   (= t u) (< t u) (<= t u) (> t u) (>= t u)
//   (Ma t) (Mb t) (R n r t) (Ra n r t) (Rb n r t)
//   (not f) (and f ...) (or f ...) (implies f g) (iff f g)
//   (forall (x bound) f) (exists (x bound) f)     bound is a term
//
// A catalog file is a sequence of (sentence NAME FORMULA) forms; ';' starts a
// comment that runs to the end of the line.

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sg2/error.hpp"
#include "sg2/integer.hpp"

namespace sg2 {

enum class constant_kind { zero, a, b, ab, c, alpha1, beta1 };

constexpr std::string_view to_string(constant_kind k) {
    switch (k) {
    case constant_kind::zero: return "0";
    case constant_kind::a: return "a";
    case constant_kind::b: return "b";
    case constant_kind::ab: return "ab";
    case constant_kind::c: return "c";
    case constant_kind::alpha1: return "alpha1";
    case constant_kind::beta1: return "beta1";
    }
    return "?";
}

enum class term_kind {
    variable,
    constant,
    literal,
    sum,
    difference,
    scale,
    div,
    alpha,
    beta,
    pi_a,
    pi_b,
    succ,
};

struct term;
using term_ptr = std::shared_ptr<const term>;

struct term {
    term_kind kind;
    std::string name;         // variable
    constant_kind constant{}; // constant
    big_int number;           // literal
    long param = 0;           // scale factor, divisor, level, successor step
    std::vector<term_ptr> args;
};

enum class formula_kind {
    truth,
    falsity,
    eq,
    lt,
    le,
    ma,
    mb,
    res,
    res_a,
    res_b,
    negation,
    conjunction,
    disjunction,
    implies,
    iff,
    forall,
    exists,
};

struct formula;
using formula_ptr = std::shared_ptr<const formula>;

struct formula {
    formula_kind kind;
    std::vector<term_ptr> terms;
    std::vector<formula_ptr> subs;
    long n = 0; // residue modulus
    long r = 0; // residue value
    std::string var;
    term_ptr bound;
};

namespace syntax {

inline term_ptr make(term t) { return std::make_shared<const term>(std::move(t)); }
inline formula_ptr make(formula f) { return std::make_shared<const formula>(std::move(f)); }

inline term_ptr var(std::string name) { return make(term{term_kind::variable, std::move(name)}); }
inline term_ptr constant(constant_kind k) { return make(term{term_kind::constant, {}, k}); }
inline term_ptr literal(big_int v) {
    term t{term_kind::literal};
    t.number = std::move(v);
    return make(std::move(t));
}
inline term_ptr zero() { return constant(constant_kind::zero); }
inline term_ptr gen_a() { return constant(constant_kind::a); }
inline term_ptr gen_b() { return constant(constant_kind::b); }
inline term_ptr ab() { return constant(constant_kind::ab); }
inline term_ptr cond() { return constant(constant_kind::c); }
inline term_ptr alpha1() { return constant(constant_kind::alpha1); }
inline term_ptr beta1() { return constant(constant_kind::beta1); }

inline term_ptr unary(term_kind k, long param, term_ptr x) {
    term t{k};
    t.param = param;
    t.args = {std::move(x)};
    return make(std::move(t));
}
inline term_ptr add(term_ptr x, term_ptr y) {
    term t{term_kind::sum};
    t.args = {std::move(x), std::move(y)};
    return make(std::move(t));
}
inline term_ptr sub(term_ptr x, term_ptr y) {
    term t{term_kind::difference};
    t.args = {std::move(x), std::move(y)};
    return make(std::move(t));
}
inline term_ptr scale(long k, term_ptr x) { return unary(term_kind::scale, k, std::move(x)); }
inline term_ptr div(long n, term_ptr x) { return unary(term_kind::div, n, std::move(x)); }
inline term_ptr alpha(term_ptr x) { return unary(term_kind::alpha, 0, std::move(x)); }
inline term_ptr beta(term_ptr x) { return unary(term_kind::beta, 0, std::move(x)); }
inline term_ptr pi_a(long level, term_ptr x) { return unary(term_kind::pi_a, level, std::move(x)); }
inline term_ptr pi_b(long level, term_ptr x) { return unary(term_kind::pi_b, level, std::move(x)); }
inline term_ptr succ(long i, term_ptr x) { return unary(term_kind::succ, i, std::move(x)); }

inline formula_ptr truth() { return make(formula{formula_kind::truth}); }
inline formula_ptr falsity() { return make(formula{formula_kind::falsity}); }
inline formula_ptr binary(formula_kind k, term_ptr x, term_ptr y) {
    formula f{k};
    f.terms = {std::move(x), std::move(y)};
    return make(std::move(f));
}
inline formula_ptr eq(term_ptr x, term_ptr y) { return binary(formula_kind::eq, std::move(x), std::move(y)); }
inline formula_ptr lt(term_ptr x, term_ptr y) { return binary(formula_kind::lt, std::move(x), std::move(y)); }
inline formula_ptr le(term_ptr x, term_ptr y) { return binary(formula_kind::le, std::move(x), std::move(y)); }
inline formula_ptr ma(term_ptr x) {
    formula f{formula_kind::ma};
    f.terms = {std::move(x)};
    return make(std::move(f));
}
inline formula_ptr mb(term_ptr x) {
    formula f{formula_kind::mb};
    f.terms = {std::move(x)};
    return make(std::move(f));
}
inline formula_ptr residue(formula_kind k, long n, long r, term_ptr x) {
    if (n < 1 || r < 0 || r >= n) fail(error_kind::parse_error, "residue atom needs 0 <= r < n");
    formula f{k};
    f.n = n;
    f.r = r;
    f.terms = {std::move(x)};
    return make(std::move(f));
}
inline formula_ptr res(long n, long r, term_ptr x) { return residue(formula_kind::res, n, r, std::move(x)); }
inline formula_ptr res_a(long n, long r, term_ptr x) { return residue(formula_kind::res_a, n, r, std::move(x)); }
inline formula_ptr res_b(long n, long r, term_ptr x) { return residue(formula_kind::res_b, n, r, std::move(x)); }
inline formula_ptr negation(formula_ptr x) {
    formula f{formula_kind::negation};
    f.subs = {std::move(x)};
    return make(std::move(f));
}
inline formula_ptr conjunction(std::vector<formula_ptr> xs) {
    formula f{formula_kind::conjunction};
    f.subs = std::move(xs);
    return make(std::move(f));
}
inline formula_ptr disjunction(std::vector<formula_ptr> xs) {
    formula f{formula_kind::disjunction};
    f.subs = std::move(xs);
    return make(std::move(f));
}
inline formula_ptr implies(formula_ptr x, formula_ptr y) {
    formula f{formula_kind::implies};
    f.subs = {std::move(x), std::move(y)};
    return make(std::move(f));
}
inline formula_ptr iff(formula_ptr x, formula_ptr y) {
    formula f{formula_kind::iff};
    f.subs = {std::move(x), std::move(y)};
    return make(std::move(f));
}
inline formula_ptr quantifier(formula_kind k, std::string v, term_ptr bound, formula_ptr body) {
    formula f{k};
    f.var = std::move(v);
    f.bound = std::move(bound);
    f.subs = {std::move(body)};
    return make(std::move(f));
}
inline formula_ptr forall(std::string v, term_ptr bound, formula_ptr body) {
    return quantifier(formula_kind::forall, std::move(v), std::move(bound), std::move(body));
}
inline formula_ptr exists(std::string v, term_ptr bound, formula_ptr body) {
    return quantifier(formula_kind::exists, std::move(v), std::move(bound), std::move(body));
}

} // namespace syntax

// ---------------------------------------------------------------------------
// printing

inline std::string to_sexpr(const term& t);

inline std::string to_sexpr(const term_ptr& t) { return to_sexpr(*t); }

inline std::string to_sexpr(const term& t) {
    auto unary_form = [&](std::string_view head, bool with_param) {
        std::string s = "(" + std::string(head);
        if (with_param) s += " " + std::to_string(t.param);
        return s + " " + to_sexpr(t.args[0]) + ")";
    };
    switch (t.kind) {
    case term_kind::variable: return t.name;
    case term_kind::constant: return std::string(to_string(t.constant));
    case term_kind::literal: return t.number.str();
    case term_kind::sum: return "(+ " + to_sexpr(t.args[0]) + " " + to_sexpr(t.args[1]) + ")";
    case term_kind::difference: return "(- " + to_sexpr(t.args[0]) + " " + to_sexpr(t.args[1]) + ")";
    case term_kind::scale: return unary_form("*", true);
    case term_kind::div: return unary_form("div", true);
    case term_kind::alpha: return unary_form("alpha", false);
    case term_kind::beta: return unary_form("beta", false);
    case term_kind::pi_a: return unary_form("pi_a", true);
    case term_kind::pi_b: return unary_form("pi_b", true);
    case term_kind::succ: return unary_form("succ", true);
    }
    return "?";
}

inline std::string to_sexpr(const formula& f);

inline std::string to_sexpr(const formula_ptr& f) { return to_sexpr(*f); }

inline std::string to_sexpr(const formula& f) {
    auto list = [&](std::string_view head) {
        std::string s = "(" + std::string(head);
        for (const auto& g : f.subs) s += " " + to_sexpr(g);
        return s + ")";
    };
    auto atom = [&](std::string_view head) {
        std::string s = "(" + std::string(head);
        for (const auto& t : f.terms) s += " " + to_sexpr(t);
        return s + ")";
    };
    auto res_atom = [&](std::string_view head) {
        return "(" + std::string(head) + " " + std::to_string(f.n) + " " + std::to_string(f.r) + " " +
               to_sexpr(f.terms[0]) + ")";
    };
    switch (f.kind) {
    case formula_kind::truth: return "true";
    case formula_kind::falsity: return "false";
    case formula_kind::eq: return atom("=");
    case formula_kind::lt: return atom("<");
    case formula_kind::le: return atom("<=");
    case formula_kind::ma: return atom("Ma");
    case formula_kind::mb: return atom("Mb");
    case formula_kind::res: return res_atom("R");
    case formula_kind::res_a: return res_atom("Ra");
    case formula_kind::res_b: return res_atom("Rb");
    case formula_kind::negation: return list("not");
    case formula_kind::conjunction: return list("and");
    case formula_kind::disjunction: return list("or");
    case formula_kind::implies: return list("implies");
    case formula_kind::iff: return list("iff");
    case formula_kind::forall:
    case formula_kind::exists:
        return std::string("(") + (f.kind == formula_kind::forall ? "forall" : "exists") + " (" + f.var + " " +
               to_sexpr(f.bound) + ") " + to_sexpr(f.subs[0]) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// structural queries

/// Name equality with a fast path for the usual one-letter variables.
inline bool same_name(std::string_view x, std::string_view y) {
    if (x.size() != y.size()) return false;
    if (x.size() == 1) return x[0] == y[0];
    return x == y;
}

inline bool mentions(const term& t, std::string_view v) {
    if (t.kind == term_kind::variable) return same_name(t.name, v);
    for (const auto& x : t.args)
        if (mentions(*x, v)) return true;
    return false;
}

inline void free_variables(const term& t, std::set<std::string>& out) {
    if (t.kind == term_kind::variable) out.insert(t.name);
    for (const auto& x : t.args) free_variables(*x, out);
}

inline void free_variables(const formula& f, std::set<std::string>& out) {
    for (const auto& t : f.terms) free_variables(*t, out);
    if (f.kind == formula_kind::forall || f.kind == formula_kind::exists) {
        free_variables(*f.bound, out);
        std::set<std::string> inner;
        free_variables(*f.subs[0], inner);
        inner.erase(f.var);
        out.insert(inner.begin(), inner.end());
        return;
    }
    for (const auto& g : f.subs) free_variables(*g, out);
}

inline std::set<std::string> free_variables(const formula& f) {
    std::set<std::string> out;
    free_variables(f, out);
    return out;
}

inline bool is_quantifier_free(const formula& f) {
    if (f.kind == formula_kind::forall || f.kind == formula_kind::exists) return false;
    for (const auto& g : f.subs)
        if (!is_quantifier_free(*g)) return false;
    return true;
}

/// Largest absolute integer appearing in the formula (scale factors, moduli,
/// successor steps, literals).
inline big_int max_coefficient(const term& t) {
    big_int m = t.param < 0 ? -t.param : t.param;
    if (t.kind == term_kind::literal) m = abs(t.number);
    for (const auto& x : t.args) m = std::max(m, max_coefficient(*x));
    return m;
}

inline big_int max_coefficient(const formula& f) {
    big_int m = std::max(std::abs(f.n), std::abs(f.r));
    for (const auto& t : f.terms) m = std::max(m, max_coefficient(*t));
    for (const auto& g : f.subs) m = std::max(m, max_coefficient(*g));
    if (f.bound) m = std::max(m, max_coefficient(*f.bound));
    return m;
}

// ---------------------------------------------------------------------------
// reading

struct sexpr {
    std::string atom; // empty for lists
    std::vector<sexpr> items;
    bool is_list() const { return atom.empty(); }
};

namespace detail {

class sexpr_reader {
public:
    explicit sexpr_reader(std::string_view text) : text_(text) {}

    bool at_end() {
        skip();
        return pos_ >= text_.size();
    }

    sexpr read() {
        skip();
        if (pos_ >= text_.size()) error("unexpected end of input");
        if (text_[pos_] == ')') error("unexpected ')'");
        if (text_[pos_] == '(') {
            ++pos_;
            sexpr list;
            for (;;) {
                skip();
                if (pos_ >= text_.size()) error("unterminated list");
                if (text_[pos_] == ')') {
                    ++pos_;
                    return list;
                }
                list.items.push_back(read());
            }
        }
        std::size_t start = pos_;
        if (text_[pos_] == '"') {
            ++pos_;
            while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
            if (pos_ >= text_.size()) error("unterminated string");
            ++pos_;
            return sexpr{std::string(text_.substr(start + 1, pos_ - start - 2))};
        }
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';')
            ++pos_;
        return sexpr{std::string(text_.substr(start, pos_ - start))};
    }

    [[noreturn]] void error(const std::string& what) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i)
            if (text_[i] == '\n') ++line;
        fail(error_kind::parse_error, what + " (line " + std::to_string(line) + ")");
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

inline long small_int(const sexpr& e) {
    if (e.is_list() || !is_integer(e.atom)) fail(error_kind::parse_error, "expected an integer, got '" + e.atom + "'");
    try {
        return std::stol(e.atom);
    } catch (const std::exception&) {
        fail(error_kind::parse_error, "integer out of range: " + e.atom);
    }
}

inline void arity(const sexpr& e, std::size_t n) {
    if (e.items.size() != n)
        fail(error_kind::parse_error, "'" + e.items[0].atom + "' expects " + std::to_string(n - 1) + " arguments");
}

} // namespace detail

inline term_ptr to_term(const sexpr& e) {
    using namespace syntax;
    if (!e.is_list()) {
        const auto& s = e.atom;
        if (s == "0" || s == "zero") return zero();
        if (s == "a") return gen_a();
        if (s == "b") return gen_b();
        if (s == "ab") return ab();
        if (s == "c") return cond();
        if (s == "alpha1") return alpha1();
        if (s == "beta1") return beta1();
        if (detail::is_integer(s)) return literal(big_int(s));
        if (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_') return var(s);
        fail(error_kind::parse_error, "bad term atom '" + s + "'");
    }
    if (e.items.empty() || e.items[0].is_list()) fail(error_kind::parse_error, "term list needs an operator");
    const auto& head = e.items[0].atom;
    if (head == "+") {
        if (e.items.size() < 3) fail(error_kind::parse_error, "'+' needs at least two arguments");
        term_ptr acc = to_term(e.items[1]);
        for (std::size_t i = 2; i < e.items.size(); ++i) acc = add(acc, to_term(e.items[i]));
        return acc;
    }
    if (head == "-") {
        detail::arity(e, 3);
        return sub(to_term(e.items[1]), to_term(e.items[2]));
    }
    if (head == "alpha" || head == "beta") {
        detail::arity(e, 2);
        return head == "alpha" ? alpha(to_term(e.items[1])) : beta(to_term(e.items[1]));
    }
    if (head == "*" || head == "div" || head == "pi_a" || head == "pi_b" || head == "succ") {
        detail::arity(e, 3);
        long p = detail::small_int(e.items[1]);
        term_ptr x = to_term(e.items[2]);
        if (head == "*") {
            if (p < 0) fail(error_kind::parse_error, "scale factor must be nonnegative");
            return scale(p, x);
        }
        if (head == "div") {
            if (p < 2) fail(error_kind::parse_error, "divisor must be at least 2");
            return div(p, x);
        }
        if (head == "succ") return succ(p, x);
        if (p < 0) fail(error_kind::parse_error, "level must be nonnegative");
        return head == "pi_a" ? pi_a(p, x) : pi_b(p, x);
    }
    fail(error_kind::parse_error, "unknown term operator '" + head + "'");
}

inline formula_ptr to_formula(const sexpr& e) {
    using namespace syntax;
    if (!e.is_list()) {
        if (e.atom == "true") return truth();
        if (e.atom == "false") return falsity();
        fail(error_kind::parse_error, "bad formula atom '" + e.atom + "'");
    }
    if (e.items.empty() || e.items[0].is_list()) fail(error_kind::parse_error, "formula list needs an operator");
    const auto& head = e.items[0].atom;
    if (head == "=" || head == "<" || head == "<=" || head == ">" || head == ">=") {
        detail::arity(e, 3);
        auto x = to_term(e.items[1]);
        auto y = to_term(e.items[2]);
        if (head == "=") return eq(x, y);
        if (head == "<") return lt(x, y);
        if (head == "<=") return le(x, y);
        if (head == ">") return lt(y, x);
        return le(y, x);
    }
    if (head == "Ma" || head == "Mb") {
        detail::arity(e, 2);
        return head == "Ma" ? ma(to_term(e.items[1])) : mb(to_term(e.items[1]));
    }
    if (head == "R" || head == "Ra" || head == "Rb") {
        detail::arity(e, 4);
        long n = detail::small_int(e.items[1]);
        long r = detail::small_int(e.items[2]);
        auto x = to_term(e.items[3]);
        if (head == "R") return res(n, r, x);
        return head == "Ra" ? res_a(n, r, x) : res_b(n, r, x);
    }
    if (head == "not") {
        detail::arity(e, 2);
        return negation(to_formula(e.items[1]));
    }
    if (head == "and" || head == "or") {
        std::vector<formula_ptr> xs;
        for (std::size_t i = 1; i < e.items.size(); ++i) xs.push_back(to_formula(e.items[i]));
        return head == "and" ? conjunction(std::move(xs)) : disjunction(std::move(xs));
    }
    if (head == "implies" || head == "->" || head == "iff" || head == "<->") {
        detail::arity(e, 3);
        auto x = to_formula(e.items[1]);
        auto y = to_formula(e.items[2]);
        return (head == "iff" || head == "<->") ? iff(x, y) : implies(x, y);
    }
    if (head == "forall" || head == "exists") {
        detail::arity(e, 3);
        const auto& binder = e.items[1];
        if (!binder.is_list() || binder.items.size() != 2 || binder.items[0].is_list())
            fail(error_kind::parse_error, "quantifier binder must be (var bound)");
        auto bound = to_term(binder.items[1]);
        auto body = to_formula(e.items[2]);
        return head == "forall" ? forall(binder.items[0].atom, bound, body) : exists(binder.items[0].atom, bound, body);
    }
    fail(error_kind::parse_error, "unknown formula operator '" + head + "'");
}

inline term_ptr parse_term(std::string_view text) {
    detail::sexpr_reader reader(text);
    auto e = reader.read();
    if (!reader.at_end()) reader.error("trailing input after term");
    return to_term(e);
}

inline formula_ptr parse_formula(std::string_view text) {
    detail::sexpr_reader reader(text);
    auto e = reader.read();
    if (!reader.at_end()) reader.error("trailing input after formula");
    return to_formula(e);
}

struct named_formula {
    std::string name;
    formula_ptr body;
};

inline std::vector<named_formula> parse_catalog(std::string_view text) {
    detail::sexpr_reader reader(text);
    std::vector<named_formula> out;
    std::set<std::string> seen;
    while (!reader.at_end()) {
        auto e = reader.read();
        if (!e.is_list() || e.items.size() != 3 || e.items[0].atom != "sentence" || e.items[1].is_list())
            fail(error_kind::parse_error, "catalog entries must be (sentence NAME FORMULA)");
        if (!seen.insert(e.items[1].atom).second)
            fail(error_kind::parse_error, "duplicate sentence name '" + e.items[1].atom + "'");
        out.push_back({e.items[1].atom, to_formula(e.items[2])});
    }
    return out;
}

} // namespace sg2
