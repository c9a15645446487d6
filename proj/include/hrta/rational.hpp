#pragma once

// Exact arithmetic used throughout the analyses. Response-time iterates are
// rational and every ceiling/floor is taken on exact values.

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hrta {

using Integer = mpz_class;
using Rational = mpq_class;

/// Integer time unit for task parameters and simulated event times.
using Time = std::int64_t;

inline Integer to_integer(Time v) { return Integer(static_cast<long>(v)); }

/// Builds num/den in canonical form. den must be non-zero.
Rational make_rational(const Integer& num, const Integer& den);
inline Rational make_rational(Time num, Time den = 1) {
    return make_rational(to_integer(num), to_integer(den));
}
inline Rational to_rational(Time v) { return Rational(to_integer(v)); }

Integer floor(const Rational& x);
Integer ceil(const Rational& x);

/// Mathematical modulo: result in [0, m) for m > 0.
Time floor_mod(Time a, Time m);
Time floor_div(Time a, Time b);
Time ceil_div(Time a, Time b);

bool is_integer(const Rational& x);

/// Throws if the value does not fit into a 64-bit signed integer.
Time to_time(const Integer& v);

/// "88/9" or "14".
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

/// Decimal rendering with exactly `places` digits after the point, rounded
/// half away from zero.
std::string to_decimal(const Rational& x, int places = 6);

/// Parses "3", "-7/2" or a finite decimal such as "0.95" exactly.
Rational parse_rational(const std::string& text);

}  // namespace hrta
