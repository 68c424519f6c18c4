#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/factorization.hpp"
#include "novak/natural.hpp"
#include "novak/primality.hpp"

namespace novak {

// The order of a/b in the unit group mod p: least k >= 1 with a^k = b^k,
// together with its 2-adic/odd split.
struct OrderRecord {
  Natural p;
  Natural base_num;
  Natural base_den;
  Natural order;
  std::uint64_t two_adic = 0;
  Natural odd_part;
};

namespace detail {

// Order descent: start from the full group order and strip prime factors
// while the power still lands on 1.
inline Natural order_from_factored(
    const Natural& g, const Natural& p,
    const std::vector<std::pair<Natural, std::uint32_t>>& group_factors) {
  Natural t = p - 1;
  for (const auto& [r, e] : group_factors) {
    for (std::uint32_t i = 0; i < e; ++i) {
      Natural candidate = t / r;
      if (t % r == 0 && mod_pow(g, candidate, p) == 1)
        t = candidate;
      else
        break;
    }
  }
  return t;
}

}  // namespace detail

// Least k >= 1 with a^k = b^k (mod p); computed by factoring p-1 and
// descending through its divisors.  p-1 must factor completely within the
// budget.
inline OrderRecord multiplicative_order(const Natural& p, const Natural& a,
                                        const Natural& b,
                                        const FactorBudget& budget = {},
                                        const FactorLookup* cache = nullptr) {
  if (p < 3 || !is_prime(p))
    throw InvalidArgument("multiplicative_order: p must be an odd prime");
  if (a % p == 0 || b % p == 0)
    throw InvalidArgument("multiplicative_order: p divides ab");

  FactoredInteger pm1 = factorize(p - 1, budget, cache);
  if (!pm1.complete)
    throw BudgetExceeded("multiplicative_order: p-1 did not factor within budget");

  // a/b mod p as a single group element.
  Natural g = a % p;
  if (b % p != 1) {
    Natural binv = mod_pow(b % p, p - 2, p);
    g = g * binv % p;
  }

  OrderRecord rec;
  rec.p = p;
  rec.base_num = a;
  rec.base_den = b;
  if (g == 1) {
    rec.order = 1;
    rec.odd_part = 1;
    return rec;
  }
  std::vector<std::pair<Natural, std::uint32_t>> fs;
  for (const auto& f : pm1.factors) fs.emplace_back(f.prime, f.exponent);
  rec.order = detail::order_from_factored(g, p, fs);
  Natural odd = rec.order;
  while (odd % 2 == 0) {
    odd /= 2;
    ++rec.two_adic;
  }
  rec.odd_part = odd;
  return rec;
}

// Word-size order of 2 mod p given the factorization of p-1; the workhorse
// behind the sieve over all primes up to x.
inline std::uint64_t order_of_two_u64(
    std::uint64_t p,
    const std::vector<std::pair<std::uint64_t, std::uint32_t>>& pm1_factors) {
  std::uint64_t t = p - 1;
  for (const auto& [r, e] : pm1_factors) {
    for (std::uint32_t i = 0; i < e; ++i) {
      if (t % r == 0 && mod_pow_u64(2, t / r, p) == 1)
        t /= r;
      else
        break;
    }
  }
  return t;
}

}  // namespace novak
