#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/natural.hpp"

namespace novak {

// How a primality verdict was certified.  Below kDeterministicLimit the
// fixed Miller-Rabin base set is a proof; above it the test is probabilistic
// (64 rounds, bases derived deterministically from the input).
enum class PrimalityRegime { deterministic, probabilistic };

namespace detail {

// The first 13 primes certify every n < 3.317e24 (Sorenson-Webster bound).
inline constexpr std::array<std::uint64_t, 13> kMillerRabinBases = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

inline const Natural& deterministic_limit() {
  static const Natural limit("3317044064679887385961981");
  return limit;
}

inline bool miller_rabin_round(const Natural& n, const Natural& base,
                               const Natural& d, std::uint64_t s) {
  Natural a = base % n;
  if (a == 0) return true;
  Natural x = mod_pow(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (std::uint64_t i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

struct PrimalityResult {
  bool prime = false;
  PrimalityRegime regime = PrimalityRegime::deterministic;
};

inline PrimalityResult check_prime(const Natural& n) {
  if (n < 2) return {false, PrimalityRegime::deterministic};
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    if (n == p) return {true, PrimalityRegime::deterministic};
    if (n % p == 0) return {false, PrimalityRegime::deterministic};
  }
  Natural d = n - 1;
  std::uint64_t s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::uint64_t b : detail::kMillerRabinBases) {
    if (!detail::miller_rabin_round(n, Natural(b), d, s))
      return {false, PrimalityRegime::deterministic};
  }
  if (n < detail::deterministic_limit())
    return {true, PrimalityRegime::deterministic};

  // Extra rounds with bases seeded from the input, so results are
  // reproducible run to run.
  std::uint64_t seed = (n % Natural("18446744073709551616")).convert_to<std::uint64_t>();
  for (int round = 0; round < 64; ++round) {
    seed = detail::splitmix64(seed);
    Natural base = 2 + Natural(seed) % (n - 3);
    if (!detail::miller_rabin_round(n, base, d, s))
      return {false, PrimalityRegime::probabilistic};
  }
  return {true, PrimalityRegime::probabilistic};
}

inline bool is_prime(const Natural& n) { return check_prime(n).prime; }

inline bool is_prime_u64(std::uint64_t n) { return is_prime(Natural(n)); }

// Largest k with p^k | n.  Defined for n >= 1 only; p must be prime.
inline std::uint64_t valuation(const Natural& n, const Natural& p) {
  if (n < 1) throw InvalidArgument("valuation: n must be >= 1");
  if (!is_prime(p)) throw InvalidArgument("valuation: p must be prime");
  return detail::valuation_unchecked(n, p);
}

struct LteResult {
  std::uint64_t formula;  // v_p(a-b) + v_p(k)
  std::uint64_t direct;   // v_p(a^k - b^k) by exact arithmetic
};

// Both sides of the valuation identity v_p(a^k - b^k) = v_p(a-b) + v_p(k),
// valid for odd primes p with p | a-b and p coprime to ab.  b may be
// negative, which turns differences of powers into sums.
inline LteResult lte_check(const Integer& a, const Integer& b,
                           std::uint64_t k, const Natural& p) {
  if (k == 0) throw InvalidArgument("lte_check: k must be positive");
  if (p == 2 || !is_prime(p))
    throw InvalidArgument("lte_check: p must be an odd prime");
  if (a == b) throw InvalidArgument("lte_check: a = b makes v_p(a-b) infinite");
  if ((a - b) % p != 0)
    throw InvalidArgument("lte_check: p does not divide a-b");
  if (a % p == 0 || b % p == 0)
    throw InvalidArgument("lte_check: p divides ab");

  std::uint64_t formula = detail::valuation_unchecked(a - b, p) +
                          detail::valuation_unchecked(Natural(k), p);
  Integer diff = boost::multiprecision::pow(a, static_cast<unsigned>(k)) -
                 boost::multiprecision::pow(b, static_cast<unsigned>(k));
  std::uint64_t direct = detail::valuation_unchecked(diff, p);
  return {formula, direct};
}

// Primes below `bound` by a plain Eratosthenes sieve.
inline std::vector<std::uint64_t> primes_below(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound <= 2) return out;
  std::vector<bool> composite(bound, false);
  for (std::uint64_t i = 2; i < bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
  }
  return out;
}

// Smallest-prime-factor table; factors anything below its bound in O(log n).
class SpfSieve {
 public:
  explicit SpfSieve(std::uint32_t bound) : spf_(bound, 0) {
    for (std::uint32_t i = 2; i < bound; ++i) {
      if (spf_[i] != 0) continue;
      for (std::uint64_t j = i; j < bound; j += i) {
        if (spf_[j] == 0) spf_[j] = i;
      }
    }
  }

  std::uint32_t bound() const { return static_cast<std::uint32_t>(spf_.size()); }

  bool is_prime(std::uint32_t n) const { return n >= 2 && spf_[n] == n; }

  // (prime, exponent) pairs, primes strictly increasing.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> factor(
      std::uint32_t n) const {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
    while (n > 1) {
      std::uint32_t p = spf_[n];
      std::uint32_t e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> spf_;
};

}  // namespace novak
