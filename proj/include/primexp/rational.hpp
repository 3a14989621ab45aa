#pragma once

// Exact integer and rational arithmetic used for every set-membership decision.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace primexp {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
__extension__ typedef unsigned __int128 u128;

/// floor(a / b) for b > 0 (cpp_int division truncates toward zero).
BigInt floor_div(const BigInt& a, const BigInt& b);
/// ceil(a / b) for b > 0.
BigInt ceil_div(const BigInt& a, const BigInt& b);

BigInt floor(const BigRational& r);
BigInt ceil(const BigRational& r);

/// r - round(r) in [-1/2, 1/2), exact.
BigRational centered_frac(const BigRational& r);

/// Nearest double to r. Accurate to within one ulp for any magnitude.
double to_double(const BigRational& r);

std::int64_t to_int64(const BigInt& v);
bool fits_int64(const BigInt& v);

/// Parses "p/q", "p", or a finite decimal such as "0.28" into an exact rational.
BigRational parse_rational(std::string_view text);

std::string to_string(const BigInt& v);
std::string to_string(const BigRational& r);

}  // namespace primexp
