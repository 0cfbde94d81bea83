#pragma once

// Checked 128-bit integer helpers. Pivot growth in integer matrix
// reduction and lcm products is multiplicative, so every product and sum
// that can leave 64 bits goes through these.

#include <cstdint>
#include <string>

#include "chowla/errors.hpp"

namespace chowla {

using i128 = __int128;
using u128 = unsigned __int128;

inline i128 checked_add(i128 a, i128 b) {
    i128 out;
    if (__builtin_add_overflow(a, b, &out)) throw OverflowError("int128 addition overflow");
    return out;
}

inline i128 checked_sub(i128 a, i128 b) {
    i128 out;
    if (__builtin_sub_overflow(a, b, &out)) throw OverflowError("int128 subtraction overflow");
    return out;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 out;
    if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("int128 multiplication overflow");
    return out;
}

inline u128 checked_mul(u128 a, u128 b) {
    u128 out;
    if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("uint128 multiplication overflow");
    return out;
}

inline i128 checked_neg(i128 a) { return checked_sub(i128{0}, a); }

inline i128 abs128(i128 a) { return a < 0 ? checked_neg(a) : a; }

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_string(i128 v);
std::string to_string(u128 v);

// Ceiling of a/b for b > 0.
inline i128 ceil_div(i128 a, i128 b) {
    i128 q = a / b;
    if (a % b != 0 && a > 0) ++q;
    return q;
}

// Floor of a/b for b > 0.
inline i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

} // namespace chowla
