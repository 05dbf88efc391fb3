#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace faircut {

/// Exact rational number. All edge costs, budgets, fractions and LP values in
/// this library are kept exact end-to-end; doubles appear only in reports.
using Rat = mpq_class;

/// Parses "p/q", an integer, or a plain decimal such as "1.25" into an exact
/// rational. Throws InputError on malformed input or a zero denominator.
Rat parse_rational(std::string_view text);

/// mpq_class(num, den) does not reduce; this does. Use it whenever num/den
/// may share a factor.
Rat make_rat(long num, long den);

/// Canonical textual form: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& q);

/// floor/ceil to arbitrary-precision integers.
mpz_class rat_floor(const Rat& q);
mpz_class rat_ceil(const Rat& q);

bool rat_is_integer(const Rat& q);

/// Narrowing helpers; throw InternalError if the value does not fit.
long rat_floor_long(const Rat& q);
long rat_ceil_long(const Rat& q);

double rat_to_double(const Rat& q);

}  // namespace faircut
