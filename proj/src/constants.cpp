#include "primexp/constants.hpp"

namespace primexp::constants {

const std::string_view kPiDigits =
    "3."
    "1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679"
    "8214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196"
    "44288109756659334461284756482337867831652712019091456485669";

const std::string_view kEulerGammaDigits = "0.577215664901532860606512090082";

}  // namespace primexp::constants
