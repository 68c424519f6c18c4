#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "novak/errors.hpp"

namespace novak {

// Exact unbounded integers.  Natural carries a non-negativity contract at
// API boundaries; Integer appears only where the math is genuinely signed.
using Natural = boost::multiprecision::cpp_int;
using Integer = boost::multiprecision::cpp_int;

inline bool fits_u64(const Natural& n) {
  return n >= 0 && n <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t to_u64(const Natural& n) {
  return n.convert_to<std::uint64_t>();
}

// Number of bits in n (0 for n = 0).
inline std::size_t bit_length(const Natural& n) {
  if (n == 0) return 0;
  return boost::multiprecision::msb(n) + 1;
}

inline Natural pow2p1(std::uint64_t n) {
  Natural r = Natural(1) << n;
  return r + 1;
}

inline std::string to_decimal(const Natural& n) { return n.str(); }

// Strict decimal parse: digits only, no sign, no whitespace.
inline Natural parse_natural(std::string_view s) {
  if (s.empty()) throw InvalidArgument("empty number literal");
  for (char c : s) {
    if (c < '0' || c > '9')
      throw InvalidArgument("not a decimal natural: '" + std::string(s) + "'");
  }
  return Natural(std::string(s));
}

inline Integer parse_integer(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    Natural mag = parse_natural(s.substr(1));
    return s[0] == '-' ? Integer(-mag) : Integer(mag);
  }
  return parse_natural(s);
}

}  // namespace novak
