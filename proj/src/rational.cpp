#include "primexp/rational.hpp"

#include "primexp/error.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace primexp {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

BigInt ceil_div(const BigInt& a, const BigInt& b) { return -floor_div(-a, b); }

BigInt floor(const BigRational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

BigInt ceil(const BigRational& r) {
  return ceil_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

BigRational centered_frac(const BigRational& r) {
  // round half up, so the result lies in [-1/2, 1/2)
  BigRational shifted = r + BigRational(1, 2);
  return r - BigRational(floor(shifted));
}

double to_double(const BigRational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (num == 0) return 0.0;
  // Scale so the integer quotient carries 64 significant bits, then round once.
  const long num_bits = static_cast<long>(boost::multiprecision::msb(boost::multiprecision::abs(num)));
  const long den_bits = static_cast<long>(boost::multiprecision::msb(den));
  const long shift = 64 - (num_bits - den_bits);
  BigInt scaled_num = boost::multiprecision::abs(num);
  BigInt scaled_den = den;
  if (shift > 0) {
    scaled_num <<= shift;
  } else if (shift < 0) {
    scaled_den <<= -shift;
  }
  BigInt quot = scaled_num / scaled_den;
  BigInt rem = scaled_num - quot * scaled_den;
  // Sticky bit keeps the final rounding correct.
  quot <<= 1;
  if (rem != 0) quot |= 1;
  long double mant = quot.convert_to<long double>();
  double result = static_cast<double>(std::ldexp(mant, static_cast<int>(-shift - 1)));
  return num < 0 ? -result : result;
}

bool fits_int64(const BigInt& v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t to_int64(const BigInt& v) {
  require(fits_int64(v), ErrorCode::RangeTooLarge, "integer does not fit in 64 bits: " + to_string(v));
  return v.convert_to<std::int64_t>();
}

BigRational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  require(!text.empty(), ErrorCode::InvalidArgument, "empty rational literal");
  auto parse_int = [](std::string_view s) {
    require(!s.empty(), ErrorCode::InvalidArgument, "empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    require(i < s.size(), ErrorCode::InvalidArgument, "bad integer literal");
    for (std::size_t j = i; j < s.size(); ++j)
      require(std::isdigit(static_cast<unsigned char>(s[j])) != 0, ErrorCode::InvalidArgument,
              "bad integer literal '" + std::string(s) + "'");
    BigInt v(std::string(s.substr(i)));
    return s[0] == '-' ? BigInt(-v) : v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_int(trim(text.substr(0, slash)));
    BigInt den = parse_int(trim(text.substr(slash + 1)));
    require(den != 0, ErrorCode::InvalidArgument, "zero denominator");
    return BigRational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part[0] == '-';
    if (!int_part.empty() && (int_part[0] == '-' || int_part[0] == '+')) int_part.remove_prefix(1);
    BigInt whole = int_part.empty() ? BigInt(0) : parse_int(int_part);
    BigInt frac = frac_part.empty() ? BigInt(0) : parse_int(frac_part);
    require(frac >= 0, ErrorCode::InvalidArgument, "bad decimal literal");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_part.size()));
    BigRational v = BigRational(whole) + BigRational(frac, scale);
    return negative ? BigRational(-v) : v;
  }
  return BigRational(parse_int(text));
}

std::string to_string(const BigInt& v) { return v.str(); }

std::string to_string(const BigRational& r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

}  // namespace primexp
