#pragma once

#include <optional>
#include <vector>

#include "sg2/integer.hpp"
#include "sg2/semigroup.hpp"
#include "sg2/syntax.hpp"

namespace sg2 {

/// Interpretation of the constant symbols. Normally copied from the
/// semigroup; the axiom checker's mutation tests overwrite single entries.
template <integer_like Int>
struct constant_table {
    Int a, b, ab, c, alpha1, beta1;

    static constant_table canonical(const basic_semigroup<Int>& s) {
        return {s.a(), s.b(), s.ab(), s.conductor(), s.alpha1(), s.beta1()};
    }

    const Int& operator[](constant_kind k) const {
        switch (k) {
        case constant_kind::a: return a;
        case constant_kind::b: return b;
        case constant_kind::ab: return ab;
        case constant_kind::c: return c;
        case constant_kind::alpha1: return alpha1;
        case constant_kind::beta1: return beta1;
        case constant_kind::zero: break;
        }
        fail(error_kind::out_of_domain, "zero is not a mutable constant");
    }

    Int& operator[](constant_kind k) {
        return const_cast<Int&>(static_cast<const constant_table&>(*this)[k]);
    }
};

/// A concrete two-generator semigroup as a structure for the augmented
/// language. The universe, order, addition and every predicate or function
/// symbol come from the semigroup itself; only the constant symbols are read
/// from the table.
template <integer_like Int = big_int>
class finite_model {
public:
    using value_type = Int;
    static constexpr bool supports_quantifiers = true;

    explicit finite_model(basic_semigroup<Int> s)
        : s_(std::move(s)), constants_(constant_table<Int>::canonical(s_)) {}

    finite_model(basic_semigroup<Int> s, constant_table<Int> constants)
        : s_(std::move(s)), constants_(std::move(constants)) {}

    const basic_semigroup<Int>& semigroup() const noexcept { return s_; }
    const constant_table<Int>& constants() const noexcept { return constants_; }

    std::optional<Int> constant(constant_kind k) const {
        if (k == constant_kind::zero) return Int(0);
        return constants_[k];
    }

    std::optional<Int> literal(const big_int& v) const {
        Int x = narrow<Int>(v);
        if (!s_.contains(x)) return std::nullopt;
        return x;
    }

    std::optional<Int> add(const Int& x, const Int& y) const { return x + y; }

    std::optional<Int> sub(const Int& x, const Int& y) const {
        if (x < y) return std::nullopt;
        Int d = x - y;
        if (!s_.contains(d)) return std::nullopt;
        return d;
    }

    std::optional<Int> scale(long k, const Int& x) const { return Int(k) * x; }

    std::optional<Int> div(long n, const Int& x) const {
        if (x % n != 0) return std::nullopt;
        Int q = x / n;
        if (!s_.contains(q)) return std::nullopt;
        return q;
    }

    std::optional<Int> alpha(const Int& x) const {
        if (x < 0 || s_.ab() < x) return std::nullopt;
        return s_.alpha(x);
    }

    std::optional<Int> beta(const Int& x) const {
        if (x < 0 || s_.ab() < x) return std::nullopt;
        return s_.beta(x);
    }

    std::optional<Int> pi_a(long level, const Int& x) const {
        if (!in_level(level, x)) return std::nullopt;
        return s_.decompose(x).m_a * s_.a();
    }

    std::optional<Int> pi_b(long level, const Int& x) const {
        if (!in_level(level, x)) return std::nullopt;
        return s_.decompose(x).m_b * s_.b();
    }

    std::optional<Int> succ(long i, const Int& x) const { return s_.successor(x, i); }

    bool equal(const Int& x, const Int& y) const { return x == y; }
    bool less(const Int& x, const Int& y) const { return x < y; }
    bool is_ma(const Int& x) const { return s_.is_ma(x); }
    bool is_mb(const Int& x) const { return s_.is_mb(x); }
    bool residue(long n, long r, const Int& x) const { return mod_floor(x, Int(n)) == r; }
    bool residue_a(long n, long r, const Int& x) const { return s_.is_ma(x) && (x / s_.a()) % n == r; }
    bool residue_b(long n, long r, const Int& x) const { return s_.is_mb(x) && (x / s_.b()) % n == r; }

    // quantifier support

    bool contains(const Int& x) const { return s_.contains(x); }
    Int next_member(const Int& x) const { return s_.next_member(x); }

    /// M_a or M_b as a sorted point list, or nullopt when it is too large to
    /// be worth materializing.
    std::optional<std::vector<Int>> multiples(bool of_a) const {
        const Int& step = of_a ? s_.a() : s_.b();
        const Int& count = of_a ? s_.b() : s_.a();
        if (count > 1'000'000) return std::nullopt;
        std::vector<Int> out;
        for (Int x = 0; !(s_.ab() < x); x += step) out.push_back(x);
        return out;
    }

private:
    bool in_level(long level, const Int& x) const {
        if (level < 0) return false;
        Int lo = Int(level) * s_.ab();
        return !(x < lo) && x < lo + s_.ab() && s_.contains(x);
    }

    basic_semigroup<Int> s_;
    constant_table<Int> constants_;
};

} // namespace sg2
