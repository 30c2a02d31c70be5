#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>

#include "sg2/error.hpp"

namespace sg2 {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

template <class Int>
concept integer_like = std::is_same_v<Int, big_int> || std::signed_integral<Int>;

template <integer_like Int>
inline constexpr bool is_bounded_v = std::numeric_limits<Int>::is_bounded;

template <integer_like Int>
Int gcd(Int x, Int y) {
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
        Int r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

template <integer_like Int>
Int lcm(const Int& x, const Int& y) {
    if (x == 0 || y == 0) return Int(0);
    return x / gcd(x, y) * y;
}

/// Least nonnegative residue of x modulo m (m > 0).
template <integer_like Int>
Int mod_floor(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

template <integer_like Int>
Int floor_div(const Int& x, const Int& m) {
    Int q = x / m;
    if ((x % m != 0) && ((x < 0) != (m < 0))) --q;
    return q;
}

template <integer_like Int>
Int ceil_div(const Int& x, const Int& m) {
    return -floor_div(Int(-x), m);
}

/// Inverse of x modulo m in [0, m), or nullopt when gcd(x, m) != 1.
template <integer_like Int>
std::optional<Int> mod_inverse(const Int& x, const Int& m) {
    if (m == 1) return Int(0);
    Int r0 = m, r1 = mod_floor(x, m);
    Int s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        Int s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (r0 != 1) return std::nullopt;
    return mod_floor(s0, m);
}

template <integer_like Int>
std::string to_decimal(const Int& x) {
    if constexpr (std::is_same_v<Int, big_int>) {
        return x.str();
    } else {
        return std::to_string(x);
    }
}

template <integer_like Int>
Int narrow(const big_int& x) {
    if constexpr (std::is_same_v<Int, big_int>) {
        return x;
    } else {
        if (x > std::numeric_limits<Int>::max() || x < std::numeric_limits<Int>::min())
            fail(error_kind::overflow, "value " + x.str() + " does not fit the integer type");
        return static_cast<Int>(x);
    }
}

template <integer_like Int>
big_int widen(const Int& x) {
    return big_int(x);
}

inline std::string to_string(const rational& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline big_int floor(const rational& q) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    return floor_div(big_int(numerator(q)), big_int(denominator(q)));
}

inline rational frac(const rational& q) {
    return q - rational(floor(q));
}

} // namespace sg2
