#pragma once

// Seeded generators and brute-force oracles shared by the unit tests and the
// acceptance binary.

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sg2/sg2.hpp"

namespace sg2::testing {

/// splitmix64; small, seedable and identical on every platform.
class rng {
public:
    explicit rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [lo, hi]
    long uniform(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

    bool coin() { return next() & 1; }

private:
    std::uint64_t state_;
};

inline std::pair<long, long> coprime_pair(rng& r, long lo, long hi) {
    for (;;) {
        long a = r.uniform(lo, hi), b = r.uniform(lo, hi);
        if (a > b) std::swap(a, b);
        if (a >= 2 && a < b && std::gcd(a, b) == 1) return {a, b};
    }
}

/// Membership by trying every representation i*a + j*b.
inline bool member_by_search(long a, long b, long x) {
    if (x < 0) return false;
    for (long j = 0; j * b <= x; ++j)
        if ((x - j * b) % a == 0) return true;
    return false;
}

struct scan_constants {
    long frobenius, conductor, genus;
};

inline scan_constants scan(long a, long b) {
    long last_gap = -1, gaps = 0;
    for (long x = 0; x <= a * b; ++x)
        if (!member_by_search(a, b, x)) {
            last_gap = x;
            ++gaps;
        }
    return {last_gap, last_gap + 1, gaps};
}

/// Every triple (m, m_a, m_b) with m_a < b, m_b < a that sums to x.
inline std::vector<std::tuple<long, long, long>> all_decompositions(long a, long b, long x) {
    std::vector<std::tuple<long, long, long>> out;
    for (long m = 0; m * a * b <= x; ++m)
        for (long ma = 0; ma < b && m * a * b + ma * a <= x; ++ma) {
            long rest = x - m * a * b - ma * a;
            if (rest % b == 0 && rest / b < a) out.emplace_back(m, ma, rest / b);
        }
    return out;
}

inline std::string preset_path(const std::string& name) { return std::string(SG2_DATA_DIR) + "/presets/" + name + ".json"; }
inline std::string catalog_path() { return std::string(SG2_DATA_DIR) + "/sentences.sexp"; }

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"zero-m1-n3", "zero-m2-n1", "zero-m3-n2", "rational-m1-k2-n3",
                                                "rational-m3-k4-n1"};
    return names;
}

/// A reduced system with integer windows inside [0, ab] of the given semigroup.
inline reduced_system finite_system(rng& r, long a, long b) {
    reduced_system s;
    s.n = r.uniform(1, 10);
    s.mb_residue = r.uniform(0, s.n - 1);
    s.diff_residue = r.uniform(0, s.n - 1);
    long d1 = r.uniform(-1, a - 1), d2 = r.uniform(d1 + 1, a + 1);
    long x1 = r.uniform(-1, a * b - 1), x2 = r.uniform(x1 + 1, a * b + 1);
    if (r.uniform(0, 3) == 0) {
        d1 = -1;
        d2 = a + 1;
    }
    if (r.uniform(0, 3) == 0) {
        x1 = -1;
        x2 = a * b + 1;
    }
    s.diff_lo = endpoint::integer(d1);
    s.diff_hi = endpoint::integer(d2);
    s.x_lo = endpoint::integer(x1);
    s.x_hi = endpoint::integer(x2);
    return s;
}

/// A reduced system whose windows are written in the constants, posed to the
/// limit of `inv`. The modulus is drawn from those the profile covers.
inline reduced_system symbolic_system(rng& r, const limit_invariants& inv) {
    std::vector<long> moduli;
    for (long n = 1; n <= 12; ++n) {
        bool ok = detail::determined(inv.a_residues, n * inv.m).has_value();
        if (inv.kind == q0_kind::zero) ok = ok && detail::determined(inv.alpha_b_residues, n).has_value();
        if (ok) moduli.push_back(n);
    }
    reduced_system s;
    s.n = moduli[r.uniform(0, static_cast<long>(moduli.size()) - 1)];
    s.mb_residue = r.uniform(0, s.n - 1);
    s.diff_residue = r.uniform(0, s.n - 1);

    // distances x - alpha(x) lie in [0, a)
    switch (r.uniform(0, 3)) {
    case 0:
        s.diff_lo = endpoint::integer(-1);
        s.diff_hi = endpoint::terms(parse_term("a"));
        break;
    case 1:
        s.diff_lo = endpoint::integer(r.uniform(-1, 20));
        s.diff_hi = endpoint::integer(r.uniform(25, 60));
        break;
    case 2:
        s.diff_lo = endpoint::integer(r.uniform(0, 30));
        s.diff_hi = endpoint::terms(parse_term("a"));
        break;
    default:
        s.diff_lo = endpoint::integer(-1);
        s.diff_hi = endpoint::integer(r.uniform(1, 12));
        break;
    }
    switch (r.uniform(0, 3)) {
    case 0:
        s.x_lo = endpoint::integer(-1);
        s.x_hi = endpoint::terms(parse_term("ab"));
        break;
    case 1: {
        long i = r.uniform(0, 5), j = i + r.uniform(1, 6);
        s.x_lo = endpoint::terms(parse_term("(* " + std::to_string(i) + " b)"));
        s.x_hi = endpoint::terms(parse_term("(* " + std::to_string(j) + " b)"));
        break;
    }
    case 2:
        s.x_lo = endpoint::terms(parse_term("beta1"));
        s.x_hi = endpoint::terms(parse_term("ab"));
        break;
    default:
        s.x_lo = endpoint::integer(-1);
        s.x_hi = endpoint::terms(parse_term("beta1"));
        break;
    }
    return s;
}

} // namespace sg2::testing

namespace sg2::testing {

/// First-order definitions over the free variable x.
inline formula_ptr fo_ma() { return parse_formula("(or (= x ab) (not (exists (y x) (= (+ y b) x))))"); }
inline formula_ptr fo_mb() { return parse_formula("(or (= x ab) (not (exists (y x) (= (+ y a) x))))"); }

/// Any two members whose distance is at least x are subtractable. The least
/// member satisfying it is the conductor; quantifiers range up to the bound V.
inline formula_ptr fo_conductor_property() {
    return parse_formula("(forall (u V) (forall (v V) (implies (<= (+ u x) v) (exists (w v) (= (+ u w) v)))))");
}

/// R_{n,r}(x): n*ab + x = n*y + r for some y, with "+ r" as r unit steps
/// written succ(r, c) - c.
inline formula_ptr fo_residue(long n, long r) {
    return parse_formula("(exists (y (+ ab x)) (= (+ (* " + std::to_string(n) + " ab) x) (- (+ (* " +
                         std::to_string(n) + " y) (succ " + std::to_string(r) + " c)) c)))");
}

} // namespace sg2::testing
