#pragma once

#include <optional>
#include <string>
#include <utility>

#include "sg2/error.hpp"
#include "sg2/integer.hpp"

namespace sg2 {

/// s = m*ab + m_a*a + m_b*b with m_a < b and m_b < a.
template <integer_like Int>
struct decomposition {
    Int m;
    Int m_a;
    Int m_b;

    friend bool operator==(const decomposition&, const decomposition&) = default;
};

template <integer_like Int>
struct beta_k_result {
    Int beta_k;
    Int alpha_k;
    Int n_k;
};

/// How alpha/beta treat arguments above ab.
enum class alpha_domain {
    standard, ///< only [0, ab]
    extended, ///< act on the unique decomposition of members above ab
};

/// The numerical semigroup generated by two coprime integers 2 <= a < b.
///
/// Instantiated with `big_int` it is exact for any size. The fixed-width
/// instantiation refuses generators whose product could overflow the usual
/// working range (a few multiples of ab) and is meant for sweeps.
template <integer_like Int = big_int>
class basic_semigroup {
public:
    using int_type = Int;

    basic_semigroup(Int a, Int b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_ < 2 || !(a_ < b_))
            fail(error_kind::reject_order,
                 "need 2 <= a < b, got a=" + to_decimal(a_) + " b=" + to_decimal(b_));
        if (gcd(a_, b_) != 1)
            fail(error_kind::reject_not_coprime,
                 "gcd(" + to_decimal(a_) + ", " + to_decimal(b_) + ") != 1");
        if constexpr (is_bounded_v<Int>) {
            // room for 64*ab and for products of two residues below a
            if (b_ > (std::numeric_limits<Int>::max() / 64) / a_)
                fail(error_kind::overflow, "generators too large for fixed-width arithmetic");
        }
        ab_ = a_ * b_;
        conductor_ = ab_ - a_ - b_ + 1;
        frobenius_ = conductor_ - 1;
        genus_ = (a_ - 1) * (b_ - 1) / 2;
        l_ = b_ % a_;
        k_inv_ = *mod_inverse(l_, a_);
        beta1_ = k_inv_ * b_;
        alpha1_ = beta1_ - 1;
    }

    const Int& a() const noexcept { return a_; }
    const Int& b() const noexcept { return b_; }
    const Int& ab() const noexcept { return ab_; }
    const Int& conductor() const noexcept { return conductor_; }
    const Int& frobenius() const noexcept { return frobenius_; }
    const Int& genus() const noexcept { return genus_; }
    /// b mod a
    const Int& l() const noexcept { return l_; }
    /// l^{-1} mod a, which is also b^{-1} mod a
    const Int& k_inv() const noexcept { return k_inv_; }
    const Int& alpha1() const noexcept { return alpha1_; }
    const Int& beta1() const noexcept { return beta1_; }
    Int multiplicity() const { return a_; }

    /// Index j < a of the multiple j*b congruent to x modulo a.
    Int b_index(const Int& x) const { return (mod_floor(x, a_) * k_inv_) % a_; }

    // x lies in the semigroup iff it is at least the least member of its
    // residue class modulo a, and those least members are 0, b, ..., (a-1)b.
    bool contains(const Int& x) const {
        if (x < 0) return false;
        if (!(x < conductor_)) return true;
        return !(x < b_index(x) * b_);
    }

    decomposition<Int> decompose(const Int& x) const {
        if (!contains(x)) fail(error_kind::not_member, to_decimal(x) + " is not in the semigroup");
        Int m_b = b_index(x);
        Int y = (x - m_b * b_) / a_;
        return {y / b_, y % b_, std::move(m_b)};
    }

    Int value(const decomposition<Int>& d) const { return d.m * ab_ + d.m_a * a_ + d.m_b * b_; }

    bool is_ma(const Int& x) const {
        if (x == ab_) return true;
        return !(x < 0) && x < ab_ && x % a_ == 0;
    }

    bool is_mb(const Int& x) const {
        if (x == ab_) return true;
        return !(x < 0) && x < ab_ && x % b_ == 0;
    }

    /// Greatest multiple of a (an M_a element) not above x.
    Int alpha(const Int& x, alpha_domain dom = alpha_domain::standard) const {
        if (x < 0) fail(error_kind::out_of_domain, "alpha of a negative number");
        if (!(ab_ < x)) return x - x % a_;
        if (dom == alpha_domain::standard)
            fail(error_kind::out_of_domain, "alpha(" + to_decimal(x) + ") above ab");
        auto d = decompose(x);
        Int xb = d.m_b * b_;
        return d.m * ab_ + d.m_a * a_ + (xb - xb % a_);
    }

    /// Least multiple of b (an M_b element) not below x.
    Int beta(const Int& x, alpha_domain dom = alpha_domain::standard) const {
        if (x < 0) fail(error_kind::out_of_domain, "beta of a negative number");
        if (!(ab_ < x)) return ceil_div(x, b_) * b_;
        if (dom == alpha_domain::standard)
            fail(error_kind::out_of_domain, "beta(" + to_decimal(x) + ") above ab");
        auto d = decompose(x);
        Int xa = d.m_a * a_;
        return d.m * ab_ + d.m_b * b_ + ceil_div(xa, b_) * b_;
    }

    beta_k_result<Int> beta_k(const Int& k) const {
        if (k < 1 || !(k < b_))
            fail(error_kind::out_of_domain, "beta_k needs 1 <= k < b, got " + to_decimal(k));
        Int j = b_index(k);
        Int bk = j == 0 ? ab_ : j * b_;
        Int nk = (k * beta1_ - bk) / ab_;
        return {bk, bk - k, std::move(nk)};
    }

    /// i-th successor (predecessor for negative i) inside the semigroup.
    std::optional<Int> successor(Int x, long i) const {
        if (!contains(x)) return std::nullopt;
        for (; i > 0; --i) {
            do { ++x; } while (!contains(x));
        }
        for (; i < 0; ++i) {
            do {
                if (x == 0) return std::nullopt;
                --x;
            } while (!contains(x));
        }
        return x;
    }

    /// Smallest member strictly above x.
    Int next_member(Int x) const {
        if (x < 0) return Int(0);
        do { ++x; } while (!contains(x));
        return x;
    }

    bool residue(const Int& x, const Int& n, const Int& r) const {
        check_residue_args(n, r);
        return mod_floor(x, n) == r;
    }

    bool residue_a(const Int& x, const Int& n, const Int& r) const {
        check_residue_args(n, r);
        if (!is_ma(x)) fail(error_kind::out_of_domain, to_decimal(x) + " is not in M_a");
        return (x / a_) % n == r;
    }

    bool residue_b(const Int& x, const Int& n, const Int& r) const {
        check_residue_args(n, r);
        if (!is_mb(x)) fail(error_kind::out_of_domain, to_decimal(x) + " is not in M_b");
        return (x / b_) % n == r;
    }

    /// R_{n,r} through its defining sentence: some y in S has
    /// n*ab + x equal to the r-th successor of n*y. The successor walk and the
    /// membership of y are computed inside S, not by reducing x mod n.
    bool residue_by_definition(const Int& x, const Int& n, const Int& r) const {
        check_residue_args(n, r);
        if (!contains(x)) fail(error_kind::not_member, to_decimal(x) + " is not in the semigroup");
        auto base = successor(n * ab_ + x, -static_cast<long>(r));
        if (!base || *base % n != 0) return false;
        return contains(*base / n);
    }

    /// Given beta in M_b and alpha in M_a with alpha <= beta and equal
    /// residues mod n, finds beta' in M_b and alpha' in M_a with
    /// beta - alpha = n (beta' - alpha').
    std::optional<std::pair<Int, Int>> axiom12_witness(const Int& beta_elem, const Int& alpha_elem,
                                                       const Int& n) const {
        if (n < 1) fail(error_kind::out_of_domain, "modulus must be positive");
        if (!is_mb(beta_elem)) fail(error_kind::out_of_domain, to_decimal(beta_elem) + " is not in M_b");
        if (!is_ma(alpha_elem)) fail(error_kind::out_of_domain, to_decimal(alpha_elem) + " is not in M_a");
        if (beta_elem < alpha_elem) fail(error_kind::out_of_domain, "needs alpha <= beta");
        if (mod_floor(beta_elem, n) != mod_floor(alpha_elem, n))
            fail(error_kind::residue_mismatch, "beta and alpha differ modulo " + to_decimal(n));
        Int d = (beta_elem - alpha_elem) / n;
        Int j = b_index(d);
        if (j == 0 && d != 0) j = a_;
        Int bp = j * b_;
        if (bp < d) return std::nullopt;
        return std::pair<Int, Int>{bp, bp - d};
    }

    friend bool operator==(const basic_semigroup& x, const basic_semigroup& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }

private:
    static void check_residue_args(const Int& n, const Int& r) {
        if (n < 1 || r < 0 || !(r < n))
            fail(error_kind::out_of_domain, "residue predicate needs 0 <= r < n");
    }

    Int a_, b_, ab_, conductor_, frobenius_, genus_, l_, k_inv_, beta1_, alpha1_;
};

using semigroup = basic_semigroup<big_int>;
using semigroup64 = basic_semigroup<std::int64_t>;

} // namespace sg2
