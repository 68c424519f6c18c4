#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/factorization.hpp"
#include "novak/natural.hpp"
#include "novak/primality.hpp"

namespace novak {

// Outcome of the primitive-prime search for a^n + b^n.  `exceptional`
// marks the single (a, b, n) = (2, 1, 3) case where no primitive prime
// exists; everywhere else in range one is found or the budget runs out.
struct PrimitiveDivisorResult {
  Natural a;
  Natural b;
  std::uint64_t n = 0;
  std::optional<Natural> prime;
  bool exceptional = false;
};

namespace detail {

// Removes from a^n + b^n every prime that already divides some earlier
// a^k + b^k.  A shared prime q has a/b of even order 2t mod q with
// t | n, n/t odd and t < n, so stripping gcds against the sums at
// k = n/m for odd divisors m > 1 of n removes all of them, to full
// multiplicity.
inline Natural primitive_part(const Natural& a, const Natural& b,
                              std::uint64_t n) {
  Natural part = boost::multiprecision::pow(a, static_cast<unsigned>(n)) +
                 boost::multiprecision::pow(b, static_cast<unsigned>(n));
  for (std::uint64_t m = 3; m <= n; m += 2) {
    if (n % m != 0) continue;
    std::uint64_t k = n / m;
    Natural sum = boost::multiprecision::pow(a, static_cast<unsigned>(k)) +
                  boost::multiprecision::pow(b, static_cast<unsigned>(k));
    Natural g = boost::multiprecision::gcd(part, sum);
    while (g > 1) {
      part /= g;
      g = boost::multiprecision::gcd(part, sum);
    }
  }
  // 2 divides a^k + b^k either for every k (a, b both odd) or never,
  // so it is not primitive past n = 1.
  if (n > 1)
    while (part % 2 == 0) part /= 2;
  return part;
}

// A prime factor of `part`, all of whose prime factors are = 1 mod step.
// Candidates walk that progression up to the trial bound before Pollard
// rho takes over.
inline std::optional<Natural> prime_factor_in_progression(
    const Natural& part, std::uint64_t step, const FactorBudget& budget) {
  if (check_prime(part).prime) return part;
  for (Natural q = step + 1; q <= budget.trial_bound; q += step) {
    if (q * q > part) break;
    if (part % q == 0 && check_prime(q).prime) return q;
  }
  std::uint64_t iterations = budget.rho_iterations;
  std::map<Natural, std::uint32_t> primes;
  Natural cofactor = 1;
  rho_split(part, iterations, primes, cofactor);
  if (!primes.empty()) return primes.begin()->first;
  return std::nullopt;
}

}  // namespace detail

// A prime dividing a^n + b^n but none of a^k + b^k for k < n.
inline PrimitiveDivisorResult primitive_prime(const Natural& a,
                                              const Natural& b,
                                              std::uint64_t n,
                                              const FactorBudget& budget = {}) {
  if (n <= 1) throw InvalidArgument("primitive_prime: n must exceed 1");
  if (a == b) throw InvalidArgument("primitive_prime: a and b must differ");
  if (a == 0 || b == 0 || boost::multiprecision::gcd(a, b) != 1)
    throw InvalidArgument("primitive_prime: a, b must be coprime naturals");

  PrimitiveDivisorResult res;
  res.a = a;
  res.b = b;
  res.n = n;

  Natural part = detail::primitive_part(a, b, n);
  if (part == 1) {
    if (a == 2 && b == 1 && n == 3) {
      res.exceptional = true;
      return res;
    }
    throw CounterexampleError(
        "primitive_prime: no primitive prime for (" + a.str() + "," + b.str() +
        "," + std::to_string(n) + "), outside the known exceptional case");
  }
  auto p = detail::prime_factor_in_progression(part, 2 * n, budget);
  if (!p)
    throw BudgetExceeded("primitive_prime: primitive part of " + a.str() +
                         "^" + std::to_string(n) + "+" + b.str() + "^" +
                         std::to_string(n) + " resisted the budget");
  res.prime = *p;
  return res;
}

// Certified lower bound for omega(2^N + 1) via tau(N) - 1: one primitive
// prime per divisor d != 3 of N (d = 1 contributes 3).  Partial harvests
// lower the bound instead of failing.
struct OmegaLowerResult {
  Natural n;
  std::uint64_t bound = 0;            // primes actually certified
  std::vector<Natural> primes;        // ordered by harvest divisor
  std::vector<Natural> failed_divisors;
  Natural tau;                        // tau(N)
};

inline OmegaLowerResult omega_lower_via_tau(const Natural& n,
                                            const FactorBudget& budget = {},
                                            const FactorLookup* cache = nullptr) {
  if (n < 1 || n % 2 == 0)
    throw InvalidArgument("omega_lower_via_tau: N must be odd and positive");

  FactoredInteger fn = factorize(n, budget, cache);
  if (!fn.complete)
    throw BudgetExceeded("omega_lower_via_tau: N did not factor within budget");

  OmegaLowerResult res;
  res.n = n;
  res.tau = fn.tau();

  std::set<Natural> seen;
  for (const Natural& d : fn.divisors()) {
    if (d == 3) continue;  // the one divisor Zsigmondy cannot serve
    Natural p;
    if (d == 1) {
      p = 3;
    } else if (d > 10000) {
      // 2^d + 1 at this size is beyond any harvesting budget here.
      res.failed_divisors.push_back(d);
      continue;
    } else {
      try {
        auto r = primitive_prime(Natural(2), Natural(1), to_u64(d), budget);
        p = *r.prime;
      } catch (const BudgetExceeded&) {
        res.failed_divisors.push_back(d);
        continue;
      }
    }
    if (mod_pow(Natural(2), n, p) != p - 1)
      throw CounterexampleError("omega_lower_via_tau: harvested prime " +
                                p.str() + " does not divide 2^N+1");
    if (!seen.insert(p).second)
      throw CounterexampleError(
          "omega_lower_via_tau: primitive primes for distinct divisors "
          "collided at " + p.str());
    res.primes.push_back(p);
  }
  res.bound = res.primes.size();
  return res;
}

}  // namespace novak
