#pragma once

#include <string_view>

namespace primexp::constants {

/// Decimal expansion of pi, "3." followed by 259 digits.
extern const std::string_view kPiDigits;

/// Euler-Mascheroni constant to 30 significant digits.
extern const std::string_view kEulerGammaDigits;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

}  // namespace primexp::constants
