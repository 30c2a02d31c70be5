#pragma once

// The prime model of a limit semigroup whose b has a constant rational
// residue: m*b = beta_n, with q0 either 0 or m/k.
//
// Elements are exact rational combinations of ab, b, a and 1. With q0 = 0
// these four scales are independent and ab >> b >> a >> 1; with q0 = m/k the
// relation m*b = k*a + n removes b and the scales are ab >> a >> 1. Either
// way the order is lexicographic on the coefficient vector.
//
// Anything that depends on divisibility (membership, alpha, beta, residues,
// decompositions) reduces to residues of a, and of Q = alpha(b)/a when q0 = 0,
// modulo small numbers. Those come from the residue profiles. When a profile
// leaves a residue open, every compatible class is tried and the answer is
// accepted only if they all agree.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sg2/error.hpp"
#include "sg2/eval.hpp"
#include "sg2/integer.hpp"
#include "sg2/semigroup.hpp"
#include "sg2/syntax.hpp"
#include "sg2/systems.hpp"

namespace sg2 {

using residue_profile = std::map<long, long>; // modulus -> residue

enum class q0_kind { zero, rational };

struct limit_invariants {
    long m = 1, n = 1;
    q0_kind kind = q0_kind::zero;
    long k = 0;                      // rational branch: m*b = k*a + n
    residue_profile a_residues;      // a mod M
    residue_profile alpha_b_residues; // zero branch: (alpha(b)/a) mod M

    // derived by validate()
    long t = 0; // m*(b - alpha(b)) = n + t*a
    long s = 0; // s*a = -1 (mod n), so (s*a + 1)/n is the inverse of n mod a
    long l = 0; // n*beta1 = m*b + l*ab
    rational q0, q1, q2;
    bool validated = false;
};

namespace detail {

inline long gcd_l(long x, long y) {
    while (y != 0) std::tie(x, y) = std::make_pair(y, x % y);
    return x < 0 ? -x : x;
}

inline long mod_l(long x, long m) {
    long r = x % m;
    return r < 0 ? r + m : r;
}

inline std::vector<std::pair<long, int>> factor(long q) {
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= q; ++p) {
        if (q % p != 0) continue;
        int e = 0;
        while (q % p == 0) {
            q /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (q > 1) out.emplace_back(q, 1);
    return out;
}

inline void check_profile(const residue_profile& p, const char* what) {
    for (const auto& [mod, r] : p) {
        if (mod < 1) fail(error_kind::incoherent_profile, std::string(what) + ": modulus must be positive");
        if (r < 0 || r >= mod)
            fail(error_kind::incoherent_profile,
                 std::string(what) + ": residue " + std::to_string(r) + " out of range mod " + std::to_string(mod));
    }
    for (auto i = p.begin(); i != p.end(); ++i)
        for (auto j = std::next(i); j != p.end(); ++j) {
            long g = gcd_l(i->first, j->first);
            if (i->second % g != j->second % g)
                fail(error_kind::incoherent_profile, std::string(what) + ": residues mod " + std::to_string(i->first) +
                                                         " and " + std::to_string(j->first) + " disagree");
        }
}

/// The residue mod q forced by the profile, if every prime power of q is
/// covered by some listed modulus.
inline std::optional<long> determined(const residue_profile& p, long q) {
    if (q == 1) return 0;
    long r = 0, mod = 1;
    for (auto [prime, e] : factor(q)) {
        long pe = 1;
        for (int i = 0; i < e; ++i) pe *= prime;
        std::optional<long> rp;
        for (const auto& [M, res] : p)
            if (M % pe == 0) {
                rp = res % pe;
                break;
            }
        if (!rp) return std::nullopt;
        // combine r mod `mod` with rp mod pe
        auto inv = mod_inverse<long>(mod % pe, pe);
        long step = mod_l((*rp - r) % pe * *inv, pe);
        r += mod * step;
        mod *= pe;
    }
    return mod_l(r, q);
}

inline bool compatible(const residue_profile& p, long q, long r) {
    for (const auto& [M, res] : p) {
        long g = gcd_l(M, q);
        if (res % g != r % g) return false;
    }
    return true;
}

} // namespace detail

inline long profile_residue(const residue_profile& p, long q, const char* what) {
    auto r = detail::determined(p, q);
    if (!r)
        fail(error_kind::insufficient_profile,
             std::string(what) + " is needed modulo " + std::to_string(q) + " but the profile does not cover it");
    return *r;
}

/// Checks the profiles and fills in t, s, l and the ratios.
inline limit_invariants validate(limit_invariants inv) {
    if (inv.m < 1 || inv.n < 1) fail(error_kind::incoherent_profile, "m and n must be positive");
    detail::check_profile(inv.a_residues, "a_residues");
    detail::check_profile(inv.alpha_b_residues, "alphaB_residues");

    // a must be a unit mod n: a prime dividing a and n would divide m*b, and
    // either it divides b or the residue of a mod m is not a unit.
    const long an = profile_residue(inv.a_residues, inv.n, "the residue of a");
    const long am = profile_residue(inv.a_residues, inv.m, "the residue of a");
    if (detail::gcd_l(am, inv.m) != 1)
        fail(error_kind::inverse_missing, "res_m(a) = " + std::to_string(am) + " has no inverse modulo m = " +
                                              std::to_string(inv.m));
    if (detail::gcd_l(an, inv.n) != 1)
        fail(error_kind::coprimality_violation, "a and n share a factor, so a and b would not be coprime");

    // t*res_m(a) = -n (mod m)
    inv.t = 0;
    if (inv.m > 1) {
        auto ainv = mod_inverse<long>(am, inv.m);
        inv.t = detail::mod_l(-inv.n % inv.m * *ainv, inv.m);
    }
    // s*a = -1 (mod n)
    inv.s = 0;
    if (inv.n > 1) {
        auto ainv = mod_inverse<long>(an, inv.n);
        inv.s = detail::mod_l(-*ainv, inv.n);
    }
    inv.l = detail::mod_l(inv.m * inv.s, inv.n);

    if (inv.kind == q0_kind::rational) {
        if (!inv.alpha_b_residues.empty())
            fail(error_kind::incoherent_profile, "alphaB_residues only apply when q0 = 0");
        if (inv.k < inv.m) fail(error_kind::incoherent_profile, "q0 = m/k needs k >= m so that a < b");
        if (detail::mod_l(inv.k * am + inv.n, inv.m) != 0)
            fail(error_kind::incoherent_profile, "k*a + n is not divisible by m for this residue of a");
        if (detail::mod_l(inv.k, inv.m) != inv.t)
            fail(error_kind::incoherent_profile, "k mod m disagrees with the t forced by res_m(a)");
        inv.q0 = rational(inv.m, inv.k);
    } else {
        inv.q0 = 0;
    }
    inv.q1 = rational(inv.t, inv.m);
    inv.q2 = rational(inv.l, inv.n);
    inv.validated = true;
    return inv;
}

// ---------------------------------------------------------------------------
// elements

/// c_ab*ab + c_b*b + c_a*a + c_1.
struct symbolic_element {
    rational c_ab, c_b, c_a, c_1;

    friend bool operator==(const symbolic_element&, const symbolic_element&) = default;

    friend symbolic_element operator+(const symbolic_element& x, const symbolic_element& y) {
        return {x.c_ab + y.c_ab, x.c_b + y.c_b, x.c_a + y.c_a, x.c_1 + y.c_1};
    }
    friend symbolic_element operator-(const symbolic_element& x, const symbolic_element& y) {
        return {x.c_ab - y.c_ab, x.c_b - y.c_b, x.c_a - y.c_a, x.c_1 - y.c_1};
    }
    friend symbolic_element operator*(const rational& k, const symbolic_element& x) {
        return {k * x.c_ab, k * x.c_b, k * x.c_a, k * x.c_1};
    }

    /// Sign under the lexicographic order.
    int sign() const {
        for (const rational* c : {&c_ab, &c_b, &c_a, &c_1})
            if (*c != 0) return *c > 0 ? 1 : -1;
        return 0;
    }

    friend bool operator<(const symbolic_element& x, const symbolic_element& y) { return (x - y).sign() < 0; }
};

inline std::string to_string(const symbolic_element& x) {
    std::string out;
    auto put = [&](const rational& c, const char* basis) {
        if (c == 0) return;
        rational v = c;
        if (out.empty()) {
            if (v < 0) {
                out += "-";
                v = -v;
            }
        } else {
            out += v < 0 ? " - " : " + ";
            if (v < 0) v = -v;
        }
        if (*basis == '\0') {
            out += to_string(v);
        } else {
            if (v != 1) out += to_string(v) + "*";
            out += basis;
        }
    };
    put(x.c_ab, "ab");
    put(x.c_b, "b");
    put(x.c_a, "a");
    put(x.c_1, "");
    return out.empty() ? "0" : out;
}

/// The parts of x = N*ab + i*a + j*b with i < b and j < a.
struct symbolic_decomposition {
    big_int n_ab;
    symbolic_element a_part; // i*a
    symbolic_element b_part; // j*b

    friend bool operator==(const symbolic_decomposition&, const symbolic_decomposition&) = default;
};

enum class component_tag { zero, pure_ma, pure_mb, decomposed };

namespace detail {

/// rho*a + sigma
struct lin {
    rational rho, sigma;
    friend bool operator==(const lin&, const lin&) = default;
    int sign() const {
        if (rho != 0) return rho > 0 ? 1 : -1;
        if (sigma != 0) return sigma > 0 ? 1 : -1;
        return 0;
    }
};

enum class unknown { a, q };

struct need_residue {
    unknown which;
    long q;
};

struct assumption {
    unknown which;
    long q, r;
};

inline big_int floor_q(const rational& x) { return floor(x); }

inline long to_long_mod(const big_int& x, long m) {
    big_int r = x % m;
    if (r < 0) r += m;
    return static_cast<long>(r);
}

} // namespace detail

/// The prime model as a structure for the evaluator. Every operation is
/// exact; operations whose answer the profile does not pin down throw
/// InsufficientProfile, and terms outside the supported fragment throw
/// Unsupported.
class limit_model {
public:
    using value_type = symbolic_element;
    static constexpr bool supports_quantifiers = false;

private:
    limit_invariants inv_;

    // -----------------------------------------------------------------------
    // residues

    class oracle {
    public:
        oracle(const limit_model& m, const std::vector<detail::assumption>& asms) : m_(m), asms_(asms) {}

        long a_mod(long q) const { return lookup(detail::unknown::a, q); }
        long q_mod(long q) const { return lookup(detail::unknown::q, q); }

        long b_mod(long q) const {
            const auto& inv = m_.inv_;
            if (q == 1) return 0;
            // (n + t*a)/m and (k*a + n)/m are integers, so reduce a mod q*m
            long am = a_mod(q * inv.m);
            if (inv.kind == q0_kind::rational) {
                __int128 v = static_cast<__int128>(inv.k) * am + inv.n;
                return static_cast<long>((v / inv.m) % q);
            }
            __int128 lb = (static_cast<__int128>(inv.t) * am + inv.n) / inv.m;
            __int128 v = static_cast<__int128>(q_mod(q)) * (am % q) + lb;
            return static_cast<long>(v % q);
        }

        long ab_mod(long q) const {
            return static_cast<long>(static_cast<__int128>(a_mod(q)) * b_mod(q) % q);
        }

    private:
        long lookup(detail::unknown w, long q) const {
            if (q == 1) return 0;
            const auto& prof = w == detail::unknown::a ? m_.inv_.a_residues : m_.inv_.alpha_b_residues;
            if (auto r = detail::determined(prof, q)) return *r;
            for (const auto& as : asms_)
                if (as.which == w && as.q % q == 0) return as.r % q;
            throw detail::need_residue{w, q};
        }

        const limit_model& m_;
        const std::vector<detail::assumption>& asms_;
    };

    std::vector<long> candidates(detail::unknown w, long q, const std::vector<detail::assumption>& asms) const {
        if (q > 1'000'000) fail(error_kind::insufficient_profile, "residue needed modulo " + std::to_string(q));
        const auto& prof = w == detail::unknown::a ? inv_.a_residues : inv_.alpha_b_residues;
        const long mn = inv_.m * inv_.n;
        std::vector<long> out;
        for (long r = 0; r < q; ++r) {
            if (!detail::compatible(prof, q, r)) continue;
            bool ok = true;
            for (const auto& as : asms)
                if (as.which == w) {
                    long g = detail::gcd_l(as.q, q);
                    if (as.r % g != r % g) ok = false;
                }
            // a is a unit modulo every prime of m and n
            if (ok && w == detail::unknown::a && detail::gcd_l(detail::gcd_l(r, q), mn) != 1) ok = false;
            if (ok && w == detail::unknown::a && inv_.kind == q0_kind::rational) {
                long g = detail::gcd_l(q, inv_.m);
                if (detail::mod_l(inv_.k * r + inv_.n, g) != 0) ok = false;
            }
            if (ok) out.push_back(r);
        }
        return out;
    }

    template <class F>
    auto explore(F& f, std::vector<detail::assumption>& asms, std::size_t& budget) const
        -> decltype(f(std::declval<const oracle&>())) {
        using R = decltype(f(std::declval<const oracle&>()));
        detail::need_residue need{};
        try {
            oracle o(*this, asms);
            return f(o);
        } catch (const detail::need_residue& nr) {
            need = nr;
        }
        auto cands = candidates(need.which, need.q, asms);
        if (cands.empty())
            fail(error_kind::incoherent_profile, "no residue modulo " + std::to_string(need.q) + " fits the profile");
        std::optional<R> first;
        for (long c : cands) {
            if (budget == 0) fail(error_kind::insufficient_profile, "too many residue classes left open by the profile");
            --budget;
            asms.push_back({need.which, need.q, c});
            R r = explore(f, asms, budget);
            asms.pop_back();
            if (!first) {
                first = std::move(r);
            } else if (!(r == *first)) {
                fail(error_kind::insufficient_profile,
                     std::string("the answer depends on ") + (need.which == detail::unknown::a ? "a" : "alpha(b)/a") +
                         " modulo " + std::to_string(need.q) + ", which the profile does not fix");
            }
        }
        return std::move(*first);
    }

    template <class F>
    auto determine(F&& f) const {
        std::vector<detail::assumption> asms;
        std::size_t budget = enumeration_budget;
        return explore(f, asms, budget);
    }

    /// (c * X) mod M as a rational in [0, M), for X with known residues.
    template <class Res>
    static rational mod_times(const rational& c, long M, Res&& x_mod) {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (c == 0) return 0;
        const big_int q = denominator(c);
        if (q > 1'000'000) fail(error_kind::insufficient_profile, "denominator too large");
        const long qm = static_cast<long>(q) * M;
        long p = detail::to_long_mod(numerator(c), qm);
        long x = x_mod(qm);
        long v = static_cast<long>(static_cast<__int128>(p) * x % qm);
        return rational(big_int(v), q);
    }

    /// x mod (M*a) as rho*a + sigma in [0, M*a).
    detail::lin mod_ma(const oracle& o, const value_type& x, long M) const {
        rational rho = mod_times(x.c_ab, M, [&](long q) { return o.b_mod(q); }) + x.c_a;
        rational sigma = x.c_1;
        if (inv_.kind == q0_kind::zero && x.c_b != 0) {
            rho += mod_times(x.c_b, M, [&](long q) { return o.q_mod(q); });
            rho += x.c_b * rational(inv_.t, inv_.m);
            sigma += x.c_b * rational(inv_.n, inv_.m);
        }
        rational quot = rho / M;
        big_int F = detail::floor_q(quot);
        if (quot == rational(F) && sigma < 0) F -= 1;
        return {rho - rational(F * M), sigma};
    }

    /// x mod (M*b) as an element gamma*b + (lower part) in [0, M*b).
    value_type mod_mb(const oracle& o, const value_type& x, long M) const {
        rational gamma = mod_times(x.c_ab, M, [&](long q) { return o.a_mod(q); });
        detail::lin lower;
        if (inv_.kind == q0_kind::zero) {
            gamma += x.c_b;
            lower = {x.c_a, x.c_1};
        } else {
            gamma += x.c_a * rational(inv_.m, inv_.k);
            lower = {0, x.c_1 - x.c_a * rational(inv_.n, inv_.k)};
        }
        rational quot = gamma / M;
        big_int F = detail::floor_q(quot);
        if (quot == rational(F) && lower.sign() < 0) F -= 1;
        gamma -= rational(F * M);
        if (inv_.kind == q0_kind::zero) return {0, gamma, lower.rho, lower.sigma};
        return normalize({0, gamma, 0, lower.sigma});
    }

    /// x mod j, or nullopt when x is not an integer.
    std::optional<long> residue_int(const oracle& o, const value_type& x, long j) const {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        big_int D = 1;
        for (const rational* c : {&x.c_ab, &x.c_b, &x.c_a, &x.c_1}) D = lcm<big_int>(D, denominator(*c));
        if (D * j > 1'000'000) fail(error_kind::insufficient_profile, "modulus too large after clearing denominators");
        const long d = static_cast<long>(D), dj = d * j;
        auto coef = [&](const rational& c) { return detail::to_long_mod(numerator(c) * (D / denominator(c)), dj); };
        __int128 v = static_cast<__int128>(coef(x.c_ab)) * o.ab_mod(dj);
        v += static_cast<__int128>(coef(x.c_b)) * o.b_mod(dj);
        v += static_cast<__int128>(coef(x.c_a)) * o.a_mod(dj);
        v += coef(x.c_1);
        long X = static_cast<long>(v % dj);
        if (X % d != 0) return std::nullopt;
        return X / d;
    }

    /// j = b_index(x), the M_b index of x: j*b = x (mod a), 0 <= j < a.
    detail::lin b_index(const oracle& o, const value_type& x) const {
        auto r = mod_ma(o, x, 1);
        // u = m*(s*a + 1)/n is the inverse of b mod a; j = r*u mod a
        const rational mn(inv_.m, inv_.n);
        const rational s(inv_.s);
        rational c2 = mn * r.rho * s, c1 = mn * (r.rho + r.sigma * s), c0 = mn * r.sigma;
        rational f = mod_times(c2, 1, [&](long q) { return o.a_mod(q); });
        rational top = f + c1;
        big_int F = detail::floor_q(top);
        if (top == rational(F) && c0 < 0) F -= 1;
        return {top - rational(F), c0};
    }

    value_type times_b(const detail::lin& j) const { return normalize({j.rho, j.sigma, 0, 0}); }

    bool contains_with(const oracle& o, const value_type& x) const {
        if (x.sign() < 0) return false;
        if (!residue_int(o, x, 1)) return false;
        return (x - times_b(b_index(o, x))).sign() >= 0;
    }

    std::optional<symbolic_decomposition> decompose_with(const oracle& o, const value_type& x) const {
        if (!contains_with(o, x)) return std::nullopt;
        value_type jb = times_b(b_index(o, x));
        value_type y = x - jb;
        big_int N = detail::floor_q(y.c_ab);
        if (y.c_ab == rational(N) && value_type{0, y.c_b, y.c_a, y.c_1}.sign() < 0) N -= 1;
        return symbolic_decomposition{N, y - rational(N) * ab_elem(), jb};
    }

    std::optional<symbolic_decomposition> decompose_at(long level, const value_type& x) const {
        if (level < 0) return std::nullopt;
        value_type lo = rational(level) * ab_elem(), hi = rational(level + 1) * ab_elem();
        if (x < lo || !(x < hi)) return std::nullopt;
        return decompose(x);
    }


public:
    explicit limit_model(limit_invariants inv) : inv_(inv.validated ? std::move(inv) : validate(std::move(inv))) {}

    const limit_invariants& invariants() const noexcept { return inv_; }

    // scales

    symbolic_element zero_elem() const { return {}; }
    symbolic_element a_elem() const { return {0, 0, 1, 0}; }
    symbolic_element b_elem() const { return normalize({0, 1, 0, 0}); }
    symbolic_element ab_elem() const { return {1, 0, 0, 0}; }
    symbolic_element unit() const { return {0, 0, 0, 1}; }
    symbolic_element conductor() const { return ab_elem() - a_elem() - b_elem() + unit(); }
    symbolic_element beta1() const {
        // beta1 = b * (b^{-1} mod a) = frac(m*s/n)*ab + (m/n)*b
        rational ms(inv_.m * inv_.s, inv_.n);
        return normalize({ms - rational(detail::floor_q(ms)), rational(inv_.m, inv_.n), 0, 0});
    }
    symbolic_element alpha1() const { return beta1() - unit(); }
    symbolic_element alpha_b() const {
        return b_elem() - rational(1, inv_.m) * symbolic_element{0, 0, rational(inv_.t), rational(inv_.n)};
    }

    /// In the rational branch b is written through a.
    symbolic_element normalize(symbolic_element x) const {
        if (inv_.kind == q0_kind::rational && x.c_b != 0) {
            x.c_a += x.c_b * rational(inv_.k, inv_.m);
            x.c_1 += x.c_b * rational(inv_.n, inv_.m);
            x.c_b = 0;
        }
        return x;
    }

    // evaluator interface

    std::optional<value_type> constant(constant_kind k) const {
        switch (k) {
        case constant_kind::zero: return zero_elem();
        case constant_kind::a: return a_elem();
        case constant_kind::b: return b_elem();
        case constant_kind::ab: return ab_elem();
        case constant_kind::c: return conductor();
        case constant_kind::alpha1: return alpha1();
        case constant_kind::beta1: return beta1();
        }
        return std::nullopt;
    }

    /// Only 0 is a standard member; every positive integer lies below a.
    std::optional<value_type> literal(const big_int& v) const {
        if (v == 0) return zero_elem();
        return std::nullopt;
    }

    std::optional<value_type> add(const value_type& x, const value_type& y) const { return x + y; }

    std::optional<value_type> sub(const value_type& x, const value_type& y) const {
        value_type d = x - y;
        if (d.sign() < 0) return std::nullopt;
        if (!contains(d)) return std::nullopt;
        return d;
    }

    std::optional<value_type> scale(long k, const value_type& x) const { return rational(k) * x; }

    std::optional<value_type> div(long n, const value_type& x) const {
        return determine([&](const oracle& o) -> std::optional<value_type> {
            auto r = residue_int(o, x, n);
            if (!r || *r != 0) return std::nullopt;
            value_type q = rational(1, n) * x;
            if (!contains_with(o, q)) return std::nullopt;
            return q;
        });
    }

    std::optional<value_type> alpha(const value_type& x) const {
        if (x.sign() < 0 || ab_elem() < x) return std::nullopt;
        return determine([&](const oracle& o) -> std::optional<value_type> {
            auto r = mod_ma(o, x, 1);
            return x - symbolic_element{0, 0, r.rho, r.sigma};
        });
    }

    std::optional<value_type> beta(const value_type& x) const {
        if (x.sign() < 0 || ab_elem() < x) return std::nullopt;
        return determine([&](const oracle& o) -> std::optional<value_type> {
            return x + mod_mb(o, rational(-1) * x, 1);
        });
    }

    std::optional<value_type> pi_a(long level, const value_type& x) const {
        auto d = decompose_at(level, x);
        if (!d) return std::nullopt;
        return d->a_part;
    }

    std::optional<value_type> pi_b(long level, const value_type& x) const {
        auto d = decompose_at(level, x);
        if (!d) return std::nullopt;
        return d->b_part;
    }

    /// Successors are only followed above the conductor, where they are +i.
    std::optional<value_type> succ(long i, const value_type& x) const {
        if (i == 0) return contains(x) ? std::optional<value_type>(x) : std::nullopt;
        value_type y = x + rational(i) * unit();
        value_type c = conductor();
        if (!(x < c) && !(y < c)) return y;
        if (!contains(x)) return std::nullopt;
        fail(error_kind::unsupported, "successor below the conductor is outside the symbolic fragment");
    }

    bool equal(const value_type& x, const value_type& y) const { return x == y; }
    bool less(const value_type& x, const value_type& y) const { return x < y; }

    bool is_ma(const value_type& x) const {
        if (x.sign() < 0 || ab_elem() < x) return false;
        return determine([&](const oracle& o) { return mod_ma(o, x, 1).sign() == 0; });
    }

    bool is_mb(const value_type& x) const {
        if (x.sign() < 0 || ab_elem() < x) return false;
        return determine([&](const oracle& o) { return mod_mb(o, x, 1).sign() == 0; });
    }

    bool residue(long n, long r, const value_type& x) const {
        return determine([&](const oracle& o) {
            auto v = residue_int(o, x, n);
            return v && *v == r;
        });
    }

    bool residue_a(long n, long r, const value_type& x) const {
        if (!is_ma(x)) return false;
        return determine([&](const oracle& o) {
            auto v = mod_ma(o, x, n);
            return v.sigma == 0 && v.rho == r;
        });
    }

    bool residue_b(long n, long r, const value_type& x) const {
        if (!is_mb(x)) return false;
        return determine([&](const oracle& o) {
            auto v = mod_mb(o, x, n);
            return v == normalize(rational(r) * symbolic_element{0, 1, 0, 0});
        });
    }

    // element-level queries

    bool contains(const value_type& x) const {
        return determine([&](const oracle& o) { return contains_with(o, x); });
    }

    /// x mod j for a member x.
    long residue_of(const value_type& x, long j) const {
        if (j < 1) fail(error_kind::out_of_domain, "modulus must be positive");
        return determine([&](const oracle& o) {
            auto v = residue_int(o, x, j);
            if (!v) fail(error_kind::out_of_domain, to_string(x) + " is not an integer");
            return *v;
        });
    }

    /// b mod j, derived from the profiles.
    long b_residue(long j) const {
        return determine([&](const oracle& o) { return o.b_mod(j); });
    }

    std::optional<symbolic_decomposition> decompose(const value_type& x) const {
        return determine([&](const oracle& o) { return decompose_with(o, x); });
    }

    component_tag tag(const value_type& x) const {
        if (x.sign() == 0) return component_tag::zero;
        if (is_ma(x)) return component_tag::pure_ma;
        if (is_mb(x)) return component_tag::pure_mb;
        return component_tag::decomposed;
    }

    /// Checked operations for library callers; the evaluator uses the
    /// optional-returning forms above.
    value_type checked_sub(const value_type& x, const value_type& y) const {
        auto r = sub(x, y);
        if (!r) fail(error_kind::not_subtractable, to_string(x) + " - " + to_string(y) + " is not a member");
        return *r;
    }

    value_type checked_div(long n, const value_type& x) const {
        if (n < 1) fail(error_kind::out_of_domain, "divisor must be positive");
        auto r = div(n, x);
        if (!r) fail(error_kind::not_divisible, to_string(x) + " has no member quotient by " + std::to_string(n));
        return *r;
    }

    value_type checked_alpha(const value_type& x) const {
        auto r = alpha(x);
        if (!r) fail(error_kind::out_of_domain, "alpha is defined on [0, ab] only");
        return *r;
    }

    value_type checked_beta(const value_type& x) const {
        auto r = beta(x);
        if (!r) fail(error_kind::out_of_domain, "beta is defined on [0, ab] only");
        return *r;
    }

    int compare(const value_type& x, const value_type& y) const { return (x - y).sign(); }

    /// Cap on the number of residue classes tried for one operation.
    static constexpr std::size_t enumeration_budget = 20000;

};

// ---------------------------------------------------------------------------
// sentences and systems

/// Truth of a closed quantifier-free sentence in the prime model.
inline eval_result eval_qf_sentence(const limit_model& model, const formula& f) {
    if (!is_quantifier_free(f)) fail(error_kind::unsupported, "the limit model evaluates quantifier-free sentences only");
    return eval_formula(model, f);
}

inline eval_result eval_qf_sentence(const limit_invariants& inv, const formula& f) {
    return eval_qf_sentence(limit_model(inv), f);
}

// ---------------------------------------------------------------------------
// finite witnesses

inline big_int profile_lcm(const residue_profile& p) {
    big_int L = 1;
    for (const auto& [mod, r] : p) L = lcm<big_int>(L, big_int(mod));
    return L;
}

/// Least x >= floor with x congruent to the profile on every listed modulus.
inline big_int least_matching(const residue_profile& p, const big_int& floor_value) {
    const big_int L = profile_lcm(p);
    if (L > 1'000'000'000) fail(error_kind::unsatisfiable_spec, "profile moduli are too large to combine");
    const long r = *detail::determined(p, static_cast<long>(L));
    big_int x = floor_value + mod_floor(big_int(r) - floor_value, L);
    return x;
}

/// The semigroup with generator a and the b forced by the invariants and Q.
inline std::optional<std::pair<big_int, big_int>> partner(const limit_invariants& inv, const big_int& a,
                                                          const big_int& q) {
    big_int b;
    if (inv.kind == q0_kind::rational) {
        big_int num = inv.k * a + inv.n;
        if (num % inv.m != 0) return std::nullopt;
        b = num / inv.m;
    } else {
        big_int num = inv.t * a + inv.n;
        if (num % inv.m != 0) return std::nullopt;
        b = q * a + num / inv.m;
    }
    if (!(a < b) || a <= std::max(inv.m, inv.n) || gcd<big_int>(a, b) != 1) return std::nullopt;
    if (mod_floor(big_int(inv.m * b - inv.n), a) != 0) return std::nullopt;
    return std::make_pair(a, b);
}

struct witness_floors {
    big_int a_floor = 1000;
    big_int q_floor = 10; // zero branch: alpha(b)/a is at least this
};

/// The first semigroup at or above the floors that matches the invariants:
/// a runs through its profile class, and with q0 = 0 so does alpha(b)/a.
inline basic_semigroup<big_int> construct_witness(const limit_invariants& inv, const witness_floors& floors) {
    const big_int La = profile_lcm(inv.a_residues);
    big_int a = least_matching(inv.a_residues, std::max(floors.a_floor, big_int(2)));
    big_int q = inv.kind == q0_kind::zero ? least_matching(inv.alpha_b_residues, floors.q_floor) : big_int(0);
    for (int tries = 0; tries < 10000; ++tries, a += La) {
        if (auto ab = partner(inv, a, q)) return basic_semigroup<big_int>(ab->first, ab->second);
    }
    fail(error_kind::witness_construction_failed, "no semigroup above the floor matches the invariants");
}

struct system_witness {
    big_int a, b;
    std::optional<big_int> x; // least solution in the witness
};

struct system_decision {
    bool realizable = false;
    bool decided_without_witness = false;
    bool witnesses_agree = true;
    std::vector<system_witness> witnesses;
};

struct decide_options {
    std::optional<big_int> a_floor; // default: 10 * largest coefficient, at least 1000
    int witness_count = 2;
};

inline big_int max_coefficient(const reduced_system& sys) {
    big_int m = std::max({sys.n, sys.mb_residue, sys.diff_residue, sys.ma_residue.value_or(0)});
    for (const endpoint* e : {&sys.diff_lo, &sys.diff_hi, &sys.x_lo, &sys.x_hi}) {
        if (e->value) m = std::max(m, big_int(abs(*e->value)));
        if (e->hi) m = std::max(m, max_coefficient(*e->hi));
        if (e->lo) m = std::max(m, max_coefficient(*e->lo));
    }
    return m;
}

/// Realizability of a system in the limit, decided in finite witnesses that
/// share the invariants and are large against every number in the system.
inline system_decision decide_reduced_system(const limit_invariants& raw, const reduced_system& sys,
                                             const decide_options& opt = {}) {
    const limit_model model(raw);
    const auto& inv = model.invariants();
    validate(sys);
    if (!detail::determined(inv.a_residues, sys.n * inv.m))
        fail(error_kind::insufficient_profile, "the residue of a modulo " + std::to_string(sys.n * inv.m) +
                                                   " is not in the profile");
    if (inv.kind == q0_kind::zero && !detail::determined(inv.alpha_b_residues, sys.n))
        fail(error_kind::insufficient_profile, "the M_a-residue of alpha(b) modulo " + std::to_string(sys.n) +
                                                   " is not in the profile");

    system_decision out;
    // x - alpha(x) = x modulo gcd(a, n), and x = w*b with w = mb_residue (mod n)
    const long g = detail::gcd_l(*detail::determined(inv.a_residues, sys.n), sys.n);
    if (g > 1) {
        long want = detail::mod_l(sys.mb_residue % g * model.b_residue(g), g);
        if (want != sys.diff_residue % g) {
            out.decided_without_witness = true;
            return out;
        }
    }

    big_int floor_value = opt.a_floor ? *opt.a_floor : std::max(big_int(1000), 10 * max_coefficient(sys));
    witness_floors floors{floor_value, std::max(big_int(10), 10 * max_coefficient(sys))};
    for (int i = 0; i < std::max(1, opt.witness_count); ++i) {
        auto s = construct_witness(inv, floors);
        system_witness w{s.a(), s.b(), std::nullopt};
        try {
            std::optional<semigroup64> s64;
            if (s.ab() < big_int(std::numeric_limits<std::int64_t>::max() / 64))
                s64.emplace(static_cast<std::int64_t>(s.a()), static_cast<std::int64_t>(s.b()));
            if (s64) {
                if (auto x = solve_direct(*s64, sys)) w.x = big_int(*x);
            } else if (auto x = solve_direct(s, sys)) {
                w.x = *x;
            }
        } catch (const error& e) {
            if (e.kind() != error_kind::invalid_system) throw;
            fail(error_kind::witness_construction_failed,
                 std::string("a window endpoint is not usable in the witness: ") + e.what());
        }
        if (i == 0) out.realizable = w.x.has_value();
        else if (w.x.has_value() != out.realizable) out.witnesses_agree = false;
        out.witnesses.push_back(std::move(w));
        floors.a_floor = 2 * s.a() + 1;
        floors.q_floor = 2 * floors.q_floor + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

/// Parses JSON, refusing objects with repeated keys.
inline nlohmann::json parse_json_strict(const std::string& text) {
    std::vector<std::set<std::string>> keys;
    auto cb = [&](int, nlohmann::json::parse_event_t ev, nlohmann::json& parsed) {
        using E = nlohmann::json::parse_event_t;
        if (ev == E::object_start) keys.emplace_back();
        else if (ev == E::object_end) keys.pop_back();
        else if (ev == E::key) {
            auto k = parsed.get<std::string>();
            if (!keys.back().insert(k).second) fail(error_kind::incoherent_profile, "duplicate key \"" + k + "\"");
        }
        return true;
    };
    try {
        return nlohmann::json::parse(text, cb);
    } catch (const nlohmann::json::exception& e) {
        fail(error_kind::parse_error, std::string("invalid JSON: ") + e.what());
    }
}

inline residue_profile profile_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_object()) fail(error_kind::incoherent_profile, std::string(what) + " must be an object");
    residue_profile p;
    for (const auto& [key, val] : j.items()) {
        if (!is_integer(key) || key[0] == '-' || key[0] == '+')
            fail(error_kind::incoherent_profile, std::string(what) + ": modulus key '" + key + "' is not a decimal");
        if (!val.is_number_integer()) fail(error_kind::incoherent_profile, std::string(what) + ": residue must be an integer");
        long mod = std::stol(key);
        if (!p.emplace(mod, val.get<long>()).second)
            fail(error_kind::incoherent_profile, std::string(what) + ": modulus " + key + " listed twice");
    }
    return p;
}

} // namespace detail

inline limit_invariants invariants_from_json(const nlohmann::json& j) {
    try {
        limit_invariants inv;
        inv.m = j.at("m").get<long>();
        inv.n = j.at("n").get<long>();
        const auto& q0 = j.at("q0");
        const auto kind = q0.at("kind").get<std::string>();
        if (kind == "zero") {
            inv.kind = q0_kind::zero;
            if (q0.contains("alphaB_residues"))
                inv.alpha_b_residues = detail::profile_from_json(q0.at("alphaB_residues"), "alphaB_residues");
        } else if (kind == "rational") {
            inv.kind = q0_kind::rational;
            inv.k = q0.at("k").get<long>();
        } else {
            fail(error_kind::incoherent_profile, "q0.kind must be \"zero\" or \"rational\"");
        }
        inv.a_residues = detail::profile_from_json(j.at("a_residues"), "a_residues");
        return validate(std::move(inv));
    } catch (const nlohmann::json::exception& e) {
        fail(error_kind::incoherent_profile, std::string("malformed invariants: ") + e.what());
    }
}

inline limit_invariants invariants_from_text(const std::string& text) {
    return invariants_from_json(detail::parse_json_strict(text));
}

inline nlohmann::json to_json(const limit_invariants& inv) {
    auto prof = [](const residue_profile& p) {
        nlohmann::json o = nlohmann::json::object();
        for (const auto& [mod, r] : p) o[std::to_string(mod)] = r;
        return o;
    };
    nlohmann::json j;
    j["m"] = inv.m;
    j["n"] = inv.n;
    if (inv.kind == q0_kind::zero) j["q0"] = {{"kind", "zero"}, {"alphaB_residues", prof(inv.alpha_b_residues)}};
    else j["q0"] = {{"kind", "rational"}, {"k", inv.k}};
    j["a_residues"] = prof(inv.a_residues);
    return j;
}

} // namespace sg2
