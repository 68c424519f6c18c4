#pragma once

#include <cstdint>
#include <utility>

#include "novak/errors.hpp"
#include "novak/natural.hpp"

namespace novak {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b,
                                std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t mod_pow_u64(std::uint64_t base, std::uint64_t exp,
                                 std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = mulmod_u64(result, base, mod);
    base = mulmod_u64(base, base, mod);
    exp >>= 1;
  }
  return result;
}

// base^exponent mod modulus, exact, O(log exponent) modular multiplications.
// A negative base is reduced into [0, modulus) first.
inline Natural mod_pow(const Integer& base, const Natural& exponent,
                       const Natural& modulus) {
  if (modulus < 2) throw InvalidArgument("mod_pow: modulus must be >= 2");
  Natural b0 = base % modulus;
  if (b0 < 0) b0 += modulus;
  if (fits_u64(modulus) && fits_u64(exponent))
    return Natural(mod_pow_u64(to_u64(b0), to_u64(exponent), to_u64(modulus)));
  if (fits_u64(modulus)) {
    // Square-and-multiply over the big exponent with word-size residues.
    std::uint64_t m = to_u64(modulus);
    std::uint64_t b = to_u64(b0);
    std::uint64_t result = 1 % m;
    for (std::size_t i = bit_length(exponent); i-- > 0;) {
      result = mulmod_u64(result, result, m);
      if (boost::multiprecision::bit_test(exponent, static_cast<unsigned>(i)))
        result = mulmod_u64(result, b, m);
    }
    return Natural(result);
  }
  return boost::multiprecision::powm(b0, exponent, modulus);
}

// gcd(0,n) = n; lcm(0,n) = 0; gcd*lcm = m*n when both nonzero.
inline std::pair<Natural, Natural> gcd_lcm(const Natural& m, const Natural& n) {
  Natural g = boost::multiprecision::gcd(m, n);
  if (g == 0) return {Natural(0), Natural(0)};
  return {g, m / g * n};
}

namespace detail {
// Exponent of p in n, no primality check.  n must be nonzero.
inline std::uint64_t valuation_unchecked(Natural n, const Natural& p) {
  std::uint64_t k = 0;
  if (n < 0) n = -n;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}
}  // namespace detail

}  // namespace novak
