#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/natural.hpp"
#include "novak/primality.hpp"

namespace novak {

// Explicit effort descriptor.  Budgets are parameters, never globals, so a
// partial factorization is reproducible from its inputs.
struct FactorBudget {
  std::uint64_t trial_bound = 100000;     // trial division by primes below this
  std::uint64_t rho_iterations = 1000000; // total Pollard rho work per call
};

struct FactorEntry {
  Natural prime;
  std::uint32_t exponent = 1;
  PrimalityRegime regime = PrimalityRegime::deterministic;
};

// An integer with a (possibly partial) prime factorization.
// Invariant: n = cofactor * prod(prime^exponent), primes strictly
// increasing, every prime certified, complete <=> cofactor == 1.
struct FactoredInteger {
  Natural n;
  std::vector<FactorEntry> factors;
  Natural cofactor = 1;
  bool complete = true;

  Natural product() const {
    Natural acc = cofactor;
    for (const auto& f : factors)
      acc *= boost::multiprecision::pow(f.prime, f.exponent);
    return acc;
  }

  bool consistent() const {
    if (complete != (cofactor == 1)) return false;
    for (std::size_t i = 0; i + 1 < factors.size(); ++i)
      if (!(factors[i].prime < factors[i + 1].prime)) return false;
    for (const auto& f : factors)
      if (f.exponent == 0) return false;
    return product() == n;
  }

  // Number of divisors; defined only for complete factorizations.
  Natural tau() const {
    if (!complete) throw BudgetExceeded("tau: factorization incomplete");
    Natural t = 1;
    for (const auto& f : factors) t *= f.exponent + 1;
    return t;
  }

  std::size_t omega() const { return factors.size(); }

  // All divisors in increasing order (complete factorizations only).
  std::vector<Natural> divisors() const {
    if (!complete) throw BudgetExceeded("divisors: factorization incomplete");
    std::vector<Natural> out{Natural(1)};
    for (const auto& f : factors) {
      std::size_t existing = out.size();
      Natural pk = 1;
      for (std::uint32_t e = 1; e <= f.exponent; ++e) {
        pk *= f.prime;
        for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * pk);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

namespace detail {

inline FactoredInteger from_factor_map(
    const Natural& n, const std::map<Natural, std::uint32_t>& m,
    const Natural& cofactor) {
  FactoredInteger fi;
  fi.n = n;
  for (const auto& [p, e] : m) {
    FactorEntry fe;
    fe.prime = p;
    fe.exponent = e;
    fe.regime = check_prime(p).regime;
    fi.factors.push_back(fe);
  }
  fi.cofactor = cofactor;
  fi.complete = cofactor == 1;
  return fi;
}

// Pollard rho, Brent cycle detection, gcd batched every 64 steps.
// Consumes from `iterations`; returns a nontrivial factor or nullopt.
inline std::optional<Natural> pollard_brent(const Natural& n,
                                            std::uint64_t& iterations,
                                            std::uint64_t seed) {
  if (n % 2 == 0) return Natural(2);
  if (fits_u64(n)) {
    std::uint64_t m = to_u64(n);
    std::uint64_t c = 1 + splitmix64(seed) % (m - 1);
    std::uint64_t x = 2, y = 2, d = 1, saved_y = 2;
    std::uint64_t q = 1;
    std::uint64_t count = 0;
    std::uint64_t limit = 1;
    while (d == 1 && iterations > 0) {
      x = y;
      for (std::uint64_t i = 0; i < limit && iterations > 0; ++i) {
        y = (mulmod_u64(y, y, m) + c) % m;
        std::uint64_t diff = x > y ? x - y : y - x;
        if (diff == 0) diff = 1;
        q = mulmod_u64(q, diff, m);
        --iterations;
        if (++count % 64 == 0) {
          d = std::gcd(q, m);
          if (d != 1) break;
          saved_y = y;
        }
      }
      if (d == 1) {
        d = std::gcd(q, m);
        limit *= 2;
      }
    }
    if (d == m) {
      // Batch overshot; replay stepwise from the last clean state.
      y = saved_y;
      d = 1;
      for (int i = 0; i < 128 && d == 1; ++i) {
        y = (mulmod_u64(y, y, m) + c) % m;
        std::uint64_t diff = x > y ? x - y : y - x;
        d = std::gcd(diff == 0 ? m : diff, m);
      }
    }
    if (d != 1 && d != m) return Natural(d);
    return std::nullopt;
  }

  Natural c = 1 + Natural(splitmix64(seed)) % (n - 1);
  Natural x = 2, y = 2, d = 1, saved_y = 2;
  Natural q = 1;
  std::uint64_t count = 0;
  std::uint64_t limit = 1;
  while (d == 1 && iterations > 0) {
    x = y;
    for (std::uint64_t i = 0; i < limit && iterations > 0; ++i) {
      y = (y * y + c) % n;
      Natural diff = x > y ? x - y : y - x;
      if (diff == 0) diff = 1;
      q = q * diff % n;
      --iterations;
      if (++count % 64 == 0) {
        d = boost::multiprecision::gcd(q, n);
        if (d != 1) break;
        saved_y = y;
      }
    }
    if (d == 1) {
      d = boost::multiprecision::gcd(q, n);
      limit *= 2;
    }
  }
  if (d == n) {
    y = saved_y;
    d = 1;
    for (int i = 0; i < 128 && d == 1; ++i) {
      y = (y * y + c) % n;
      Natural diff = x > y ? x - y : y - x;
      d = boost::multiprecision::gcd(diff == 0 ? n : diff, n);
    }
  }
  if (d != 1 && d != n) return d;
  return std::nullopt;
}

// Splits `n` (no factor below the trial bound) into certified primes,
// spending rho iterations; whatever resists ends up multiplied into
// `cofactor`.
inline void rho_split(const Natural& n, std::uint64_t& iterations,
                      std::map<Natural, std::uint32_t>& primes,
                      Natural& cofactor) {
  if (n == 1) return;
  if (check_prime(n).prime) {
    primes[n] += 1;
    return;
  }
  for (std::uint64_t seed = 1; seed <= 24 && iterations > 0; ++seed) {
    if (auto f = pollard_brent(n, iterations, seed)) {
      rho_split(*f, iterations, primes, cofactor);
      rho_split(n / *f, iterations, primes, cofactor);
      return;
    }
  }
  cofactor *= n;
}

}  // namespace detail

// Lookup interface the factorizer consults; FactorCache implements it.
class FactorLookup {
 public:
  virtual ~FactorLookup() = default;
  virtual std::optional<FactoredInteger> lookup(const Natural& n) const = 0;
};

namespace detail {
inline std::optional<FactoredInteger> cache_lookup(const FactorLookup* cache,
                                                   const Natural& n) {
  if (cache == nullptr) return std::nullopt;
  return cache->lookup(n);
}
}  // namespace detail

// Trial division below the budgeted bound, then cache lookup, then Pollard
// rho.  Never throws for lack of effort: incompleteness is encoded in the
// result.
inline FactoredInteger factorize(const Natural& n, const FactorBudget& budget,
                                 const FactorLookup* cache = nullptr) {
  if (n < 1) throw InvalidArgument("factorize: n must be >= 1");
  std::map<Natural, std::uint32_t> primes;
  Natural rest = n;

  std::uint64_t p = 2;
  while (p < budget.trial_bound && rest > 1) {
    if (Natural(p) * p > rest) break;
    while (rest % p == 0) {
      primes[Natural(p)] += 1;
      rest /= p;
    }
    p += (p == 2) ? 1 : 2;
  }
  Natural cofactor = 1;
  if (rest > 1) {
    if (check_prime(rest).prime) {
      primes[rest] += 1;
    } else {
      bool resolved = false;
      if (auto hit = detail::cache_lookup(cache, rest)) {
        for (const auto& f : hit->factors) primes[f.prime] += f.exponent;
        cofactor = hit->cofactor;
        resolved = true;
      }
      if (!resolved) {
        std::uint64_t iterations = budget.rho_iterations;
        detail::rho_split(rest, iterations, primes, cofactor);
      }
    }
  }
  return detail::from_factor_map(n, primes, cofactor);
}

// Factorization of 2^d + 1 for odd d.  Prime factors q satisfy
// 2^d = -1 (mod q), so instead of blind trial division each candidate
// prime below the bound is screened with one modular exponentiation, and
// accepted factors are then divided out exactly.
inline FactoredInteger factorize_pow2p1(std::uint64_t d,
                                        const FactorBudget& budget,
                                        const FactorLookup* cache = nullptr) {
  if (d == 0 || d % 2 == 0)
    throw InvalidArgument("factorize_pow2p1: d must be odd and positive");
  Natural value = pow2p1(d);
  if (auto hit = detail::cache_lookup(cache, value)) return *hit;

  std::map<Natural, std::uint32_t> primes;
  Natural rest = value;
  for (std::uint64_t q : primes_below(budget.trial_bound)) {
    if (Natural(q) * q > rest) break;
    if (mod_pow_u64(2, d, q) != q - 1) continue;
    while (rest % q == 0) {
      primes[Natural(q)] += 1;
      rest /= q;
    }
    if (rest == 1) break;
  }
  Natural cofactor = 1;
  if (rest > 1) {
    if (check_prime(rest).prime) {
      primes[rest] += 1;
    } else {
      std::uint64_t iterations = budget.rho_iterations;
      detail::rho_split(rest, iterations, primes, cofactor);
    }
  }
  return detail::from_factor_map(value, primes, cofactor);
}

}  // namespace novak
