#pragma once

// Systems of constraints on an unknown x in M_b:
//   (x/b)       = mb_residue   (mod n)
//   x - alpha(x) = diff_residue (mod n)
//   alpha(x)/a  = ma_residue   (mod n)      full systems only
//   diff_lo < x - alpha(x) < diff_hi
//   x_lo    < x            < x_hi
//
// Window endpoints are plain integers or a difference hi - lo of two terms in
// the constants (lo may be omitted). Term endpoints let the same system be
// posed to semigroups of any size, which is how the limit model decides them.

#include "json.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sg2/error.hpp"
#include "sg2/eval.hpp"
#include "sg2/finite_model.hpp"
#include "sg2/integer.hpp"
#include "sg2/semigroup.hpp"
#include "sg2/syntax.hpp"

namespace sg2 {

struct endpoint {
    std::optional<big_int> value; // integer endpoint
    term_ptr hi, lo;              // otherwise hi - lo (lo null means 0)

    static endpoint integer(big_int v) { return {std::move(v), nullptr, nullptr}; }
    static endpoint terms(term_ptr hi, term_ptr lo = nullptr) { return {std::nullopt, std::move(hi), std::move(lo)}; }

    bool symbolic() const noexcept { return !value.has_value(); }
};

struct reduced_system {
    long n = 1;
    long mb_residue = 0;
    long diff_residue = 0;
    std::optional<long> ma_residue; // present for full systems
    endpoint diff_lo, diff_hi;
    endpoint x_lo, x_hi;

    bool is_full() const noexcept { return ma_residue.has_value(); }
};

/// Windows resolved to integers for one semigroup.
struct concrete_windows {
    big_int diff_lo, diff_hi, x_lo, x_hi;
};

inline void validate(const reduced_system& sys) {
    if (sys.n < 1) fail(error_kind::invalid_system, "modulus must be positive");
    auto check = [&](long r, const char* what) {
        if (r < 0 || r >= sys.n) fail(error_kind::invalid_system, std::string(what) + " must lie in [0, n)");
    };
    check(sys.mb_residue, "mb_residue");
    check(sys.diff_residue, "diff_residue");
    if (sys.ma_residue) check(*sys.ma_residue, "ma_residue");
    for (const endpoint* e : {&sys.diff_lo, &sys.diff_hi, &sys.x_lo, &sys.x_hi})
        if (!e->value && !e->hi) fail(error_kind::invalid_system, "endpoint has neither a value nor terms");
    auto order = [](const endpoint& lo, const endpoint& hi, const char* what) {
        if (lo.value && hi.value && !(*lo.value < *hi.value))
            fail(error_kind::invalid_system, std::string(what) + " window is empty");
    };
    order(sys.diff_lo, sys.diff_hi, "diff");
    order(sys.x_lo, sys.x_hi, "x");
}

template <integer_like Int>
big_int resolve(const basic_semigroup<Int>& s, const endpoint& e) {
    if (e.value) return *e.value;
    finite_model<Int> m(s);
    auto hi = eval_term(m, {}, *e.hi);
    if (!hi) fail(error_kind::invalid_system, "endpoint " + to_sexpr(e.hi) + " is undefined here");
    big_int v = widen(*hi);
    if (e.lo) {
        auto lo = eval_term(m, {}, *e.lo);
        if (!lo) fail(error_kind::invalid_system, "endpoint " + to_sexpr(e.lo) + " is undefined here");
        v -= widen(*lo);
    }
    return v;
}

template <integer_like Int>
concrete_windows resolve_windows(const basic_semigroup<Int>& s, const reduced_system& sys) {
    concrete_windows w{resolve(s, sys.diff_lo), resolve(s, sys.diff_hi), resolve(s, sys.x_lo), resolve(s, sys.x_hi)};
    if (!(w.diff_lo < w.diff_hi) || !(w.x_lo < w.x_hi))
        fail(error_kind::invalid_system, "a window is empty in this semigroup");
    return w;
}

/// Least x in M_b satisfying the system, scanning M_b upward.
template <integer_like Int>
std::optional<Int> solve_direct(const basic_semigroup<Int>& s, const reduced_system& sys) {
    validate(sys);
    const auto w = resolve_windows(s, sys);
    const Int n(sys.n);
    for (Int k = 0; !(s.a() < k); ++k) {
        Int x = k * s.b();
        big_int xw = widen(x);
        if (!(w.x_lo < xw)) continue;
        if (!(xw < w.x_hi)) break;
        if (mod_floor(k, n) != sys.mb_residue) continue;
        Int al = s.alpha(x);
        Int d = x - al;
        if (mod_floor(d, n) != sys.diff_residue) continue;
        big_int dw = widen(d);
        if (!(w.diff_lo < dw) || !(dw < w.diff_hi)) continue;
        if (sys.ma_residue && mod_floor(Int(al / s.a()), n) != *sys.ma_residue) continue;
        return x;
    }
    return std::nullopt;
}

/// Multiplication by the residue of b modulo a, a permutation of [0, a).
template <integer_like Int>
class lambda_map {
public:
    explicit lambda_map(const basic_semigroup<Int>& s) : a_(s.a()), l_(s.l()) {}
    Int operator()(const Int& w) const { return mod_floor(Int(l_ * w), a_); }
    const Int& multiplier() const noexcept { return l_; }

private:
    Int a_, l_;
};

/// Same question posed on residues: x = w*b has x - alpha(x) = lambda(w), so
/// the scan runs over w in the class of mb_residue and never touches alpha.
template <integer_like Int>
std::optional<Int> solve_via_lambda(const basic_semigroup<Int>& s, const reduced_system& sys) {
    validate(sys);
    const auto win = resolve_windows(s, sys);
    const lambda_map<Int> lambda(s);
    const Int n(sys.n);
    const big_int b = widen(s.b());
    // w*b strictly inside (x_lo, x_hi) and 0 <= w <= a
    big_int lo = floor_div(win.x_lo, b) + 1, hi = ceil_div(win.x_hi, b) - 1;
    if (lo < 0) lo = 0;
    if (hi > widen(s.a())) hi = widen(s.a());
    if (hi < lo) return std::nullopt;
    big_int first = lo + mod_floor(big_int(sys.mb_residue - lo), big_int(sys.n));
    for (big_int wb = first; !(hi < wb); wb += sys.n) {
        Int w = narrow<Int>(wb);
        // lambda(a) = 0 agrees with alpha(ab) = ab
        Int d = lambda(w);
        if (mod_floor(d, n) != sys.diff_residue) continue;
        big_int dw = widen(d);
        if (!(win.diff_lo < dw) || !(dw < win.diff_hi)) continue;
        if (sys.ma_residue) {
            Int j = (w * s.b() - d) / s.a();
            if (mod_floor(j, n) != *sys.ma_residue) continue;
        }
        return w * s.b();
    }
    return std::nullopt;
}

/// Modulus at which x mod N and (x - alpha(x)) mod N pin down the M_a-residue
/// of alpha(x) modulo n: N = n * prod_{p | n} p^{v_p(a)}.
template <integer_like Int>
big_int translation_modulus(const basic_semigroup<Int>& s, long n) {
    big_int a = widen(s.a()), N = n;
    long m = n;
    for (long p = 2; p <= m; ++p) {
        if (m % p != 0) continue;
        while (m % p == 0) m /= p;
        while (a % p == 0) {
            a /= p;
            N *= p;
        }
    }
    return N;
}

/// Reduced systems at the translation modulus whose disjunction is equivalent
/// to the full system.
template <integer_like Int>
std::vector<reduced_system> full_to_reduced(const basic_semigroup<Int>& s, const reduced_system& full) {
    validate(full);
    if (!full.ma_residue) return {full};
    const big_int Nb = translation_modulus(s, full.n);
    if (Nb > 100000) fail(error_kind::unsupported, "translation modulus too large");
    const long N = static_cast<long>(Nb), n = full.n;
    const long b = static_cast<long>(widen(s.b()) % N);
    const long aN = static_cast<long>(widen(s.a()) % N);
    const long g = std::gcd(aN == 0 ? N : aN, N);
    const long a_red = static_cast<long>((widen(s.a()) / g) % n);
    const long inv = static_cast<long>(*mod_inverse(big_int(a_red), big_int(n)));
    std::vector<reduced_system> out;
    for (long w = full.mb_residue; w < N; w += n) {
        for (long d = full.diff_residue; d < N; d += n) {
            long al = ((w * b - d) % N + N) % N;
            if (al % g != 0) continue;
            long j = ((al / g) % n) * inv % n;
            if (j != *full.ma_residue) continue;
            reduced_system r = full;
            r.n = N;
            r.mb_residue = w;
            r.diff_residue = d;
            r.ma_residue.reset();
            out.push_back(std::move(r));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json endpoint_to_json(const endpoint& e) {
    if (e.value) {
        if (*e.value >= INT64_MIN && *e.value <= INT64_MAX) return static_cast<std::int64_t>(*e.value);
        return e.value->str();
    }
    nlohmann::json j{{"hi", to_sexpr(e.hi)}};
    if (e.lo) j["lo"] = to_sexpr(e.lo);
    return j;
}

inline endpoint endpoint_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return endpoint::integer(big_int(j.get<std::int64_t>()));
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (detail::is_integer(s)) return endpoint::integer(big_int(s));
        return endpoint::terms(parse_term(s));
    }
    if (j.is_object() && j.contains("hi")) {
        term_ptr lo = j.contains("lo") ? parse_term(j.at("lo").get<std::string>()) : nullptr;
        return endpoint::terms(parse_term(j.at("hi").get<std::string>()), lo);
    }
    fail(error_kind::invalid_system, "endpoint must be an integer or {\"hi\":term,\"lo\":term}");
}

inline nlohmann::json to_json(const reduced_system& s) {
    nlohmann::json j;
    j["n"] = s.n;
    j["mb_residue"] = s.mb_residue;
    j["diff_residue"] = s.diff_residue;
    j["ma_residue"] = s.ma_residue ? nlohmann::json(*s.ma_residue) : nlohmann::json(nullptr);
    j["diff_window"] = {endpoint_to_json(s.diff_lo), endpoint_to_json(s.diff_hi)};
    j["x_window"] = {endpoint_to_json(s.x_lo), endpoint_to_json(s.x_hi)};
    return j;
}

inline reduced_system system_from_json(const nlohmann::json& j) {
    try {
        reduced_system s;
        s.n = j.at("n").get<long>();
        s.mb_residue = j.at("mb_residue").get<long>();
        s.diff_residue = j.at("diff_residue").get<long>();
        if (j.contains("ma_residue") && !j.at("ma_residue").is_null()) s.ma_residue = j.at("ma_residue").get<long>();
        const auto& dw = j.at("diff_window");
        const auto& xw = j.at("x_window");
        if (!dw.is_array() || dw.size() != 2 || !xw.is_array() || xw.size() != 2)
            fail(error_kind::invalid_system, "windows must be two-element arrays");
        s.diff_lo = endpoint_from_json(dw[0]);
        s.diff_hi = endpoint_from_json(dw[1]);
        s.x_lo = endpoint_from_json(xw[0]);
        s.x_hi = endpoint_from_json(xw[1]);
        validate(s);
        return s;
    } catch (const nlohmann::json::exception& e) {
        fail(error_kind::invalid_system, std::string("malformed system JSON: ") + e.what());
    }
}

} // namespace sg2
