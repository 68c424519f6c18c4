#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/factorization.hpp"
#include "novak/natural.hpp"
#include "novak/novak_numbers.hpp"
#include "novak/parallel.hpp"
#include "novak/primality.hpp"

namespace novak {

// n divides a^n - 1 for every a coprime to n  <=>  (p-1) | n for every
// prime p | n.  (The criterion says lambda(n) | n: for odd prime powers
// p^e || n, lambda(p^e) = p^(e-1)(p-1) divides n iff (p-1) does, the
// p-power part being automatic; the 2-power part is always automatic.)
inline bool is_novak_carmichael(const Natural& n, const FactorBudget& budget = {},
                                const FactorLookup* cache = nullptr) {
  if (n < 1) throw InvalidArgument("is_novak_carmichael: n must be >= 1");
  if (n == 1) return true;
  FactoredInteger fi = factorize(n, budget, cache);
  if (!fi.complete)
    throw BudgetExceeded("is_novak_carmichael: n did not factor within budget");
  for (const auto& f : fi.factors)
    if (f.prime > 2 && n % (f.prime - 1) != 0) return false;
  return true;
}

// The definition itself, testable at small n: a^n = 1 (mod n) for every
// a <= n coprime to n.
inline bool is_novak_carmichael_direct(std::uint64_t n) {
  if (n == 0)
    throw InvalidArgument("is_novak_carmichael_direct: n must be >= 1");
  if (n == 1) return true;
  for (std::uint64_t a = 2; a < n; ++a) {
    if (std::gcd(a, n) != 1) continue;
    if (mod_pow_u64(a, n, n) != 1) return false;
  }
  return true;
}

inline constexpr std::uint64_t kCarmichaelScanLimit = 10000000;

// All members <= x by the divisor criterion.
inline std::vector<std::uint64_t> enumerate_carmichael(std::uint64_t x) {
  if (x < 1) throw InvalidArgument("enumerate_carmichael: x must be >= 1");
  if (x > kCarmichaelScanLimit)
    throw InvalidArgument("enumerate_carmichael: bound exceeds the scan range");
  SpfSieve spf(static_cast<std::uint32_t>(x + 1));
  std::vector<std::uint64_t> out{1};
  for (std::uint64_t n = 2; n <= x; ++n) {
    bool ok = true;
    for (const auto& [p, e] : spf.factor(static_cast<std::uint32_t>(n))) {
      if (p != 2 && n % (p - 1) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(n);
  }
  return out;
}

struct SaturationTrace {
  Natural p;
  std::vector<Natural> steps;  // a_0, a_1, ..., final two equal
  Natural A;                   // the stable value
  Natural N;                   // A = 2N
};

inline constexpr std::uint64_t kSaturationCeilingBits = 1ull << 20;

// a_0 = p, a_{k+1} = lcm(a_k, p_i - 1 over primes p_i | a_k), run to the
// fixed point.  For p in the recursive prime family the limit A is a
// Carmichael-type number of the form 2N with N a member divisible by p;
// any violation is surfaced as a counterexample, never swallowed.
inline SaturationTrace saturate(const Natural& p, const FactorBudget& budget = {},
                                std::uint64_t size_ceiling_bits =
                                    kSaturationCeilingBits,
                                const FactorLookup* cache = nullptr) {
  if (!is_prime(p)) throw InvalidArgument("saturate: p must be prime");

  SaturationTrace trace;
  trace.p = p;

  std::map<Natural, std::uint32_t> current{{p, 1}};
  Natural value = p;
  trace.steps.push_back(value);

  while (true) {
    std::map<Natural, std::uint32_t> next = current;
    for (const auto& [q, e] : current) {
      if (q == 2) continue;
      FactoredInteger fq = factorize(q - 1, budget, cache);
      if (!fq.complete)
        throw BudgetExceeded("saturate: q-1 did not factor within budget");
      for (const auto& f : fq.factors) {
        auto it = next.find(f.prime);
        if (it == next.end())
          next.emplace(f.prime, f.exponent);
        else
          it->second = std::max(it->second, f.exponent);
      }
    }
    Natural next_value = 1;
    for (const auto& [q, e] : next)
      next_value *= boost::multiprecision::pow(q, e);
    if (bit_length(next_value) > size_ceiling_bits)
      throw SizeLimitExceeded("saturate: trace exceeds the size ceiling");
    trace.steps.push_back(next_value);
    if (next_value == value) break;
    current = std::move(next);
    value = next_value;
  }

  trace.A = value;
  if (trace.A % 2 != 0 || (trace.A / 2) % 2 == 0)
    throw CounterexampleError("saturate: limit " + trace.A.str() +
                              " is not twice an odd number");
  trace.N = trace.A / 2;
  if (!is_novak_carmichael(trace.A, budget, cache))
    throw CounterexampleError("saturate: limit fails the divisor criterion");
  if (!is_novak(trace.N))
    throw CounterexampleError("saturate: " + trace.N.str() +
                              " is not a member");
  if (trace.N % p != 0)
    throw CounterexampleError("saturate: seed does not divide the witness");
  return trace;
}

struct PSetReport {
  std::int64_t level = 0;  // -1 encodes the infinite level
  std::uint64_t x = 0;
  std::vector<std::uint64_t> primes;
  std::vector<std::uint64_t> undecided;
};

inline constexpr std::int64_t kLevelInfinity = -1;
inline constexpr std::uint64_t kPSetBoundLimit = 100000000;

namespace detail {

inline std::vector<std::uint64_t> residue_3_mod_8_primes(std::uint64_t x,
                                                         const SpfSieve& spf) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 3; p <= x; p += 8)
    if (spf.is_prime(static_cast<std::uint32_t>(p))) out.push_back(p);
  return out;
}

}  // namespace detail

// Level n of the recursive filtration: level 0 keeps primes = 3 (mod 8);
// level n keeps p whose (p-1)/2 factors entirely inside level n-1.
// (3-1)/2 = 1 has no prime factors, so 3 survives every level.
inline PSetReport p_set(std::int64_t level, std::uint64_t x,
                        const FactorBudget& budget = {}, unsigned workers = 1) {
  if (x < 3) throw InvalidArgument("p_set: x must be >= 3");
  if (x > kPSetBoundLimit)
    throw InvalidArgument("p_set: bound exceeds the supported sieve range");
  if (level < 0) throw InvalidArgument("p_set: level must be >= 0");
  (void)budget;
  (void)workers;

  SpfSieve spf(static_cast<std::uint32_t>(x + 1));
  std::vector<std::uint64_t> cur = detail::residue_3_mod_8_primes(x, spf);
  for (std::int64_t l = 0; l < level; ++l) {
    std::vector<bool> member(static_cast<std::size_t>(x) + 1, false);
    for (std::uint64_t p : cur) member[p] = true;
    std::vector<std::uint64_t> next;
    for (std::uint64_t p : cur) {
      bool ok = true;
      for (const auto& [r, e] :
           spf.factor(static_cast<std::uint32_t>((p - 1) / 2)))
        if (!member[r]) {
          ok = false;
          break;
        }
      if (ok) next.push_back(p);
    }
    if (next == cur) break;  // stabilized below this x
    cur = std::move(next);
  }

  PSetReport report;
  report.level = level;
  report.x = x;
  report.primes = std::move(cur);
  return report;
}

// Fixed point of the filtration, computed bottom-up: membership of p only
// depends on the strictly smaller prime factors of (p-1)/2, so one
// ascending pass decides every prime.  This agrees with the level-wise
// limit: the bottom-up set is contained in every level by induction on p,
// and any p surviving all levels survives the ascending pass because its
// factor primes, being smaller and also level-stable, were already kept.
inline PSetReport p_infinity(std::uint64_t x, const FactorBudget& budget = {},
                             unsigned workers = 1) {
  if (x < 3) throw InvalidArgument("p_infinity: x must be >= 3");
  if (x > kPSetBoundLimit)
    throw InvalidArgument("p_infinity: bound exceeds the supported sieve "
                          "range");
  (void)budget;
  (void)workers;

  SpfSieve spf(static_cast<std::uint32_t>(x + 1));
  std::vector<bool> member(static_cast<std::size_t>(x) + 1, false);
  PSetReport report;
  report.level = kLevelInfinity;
  report.x = x;
  for (std::uint64_t p : detail::residue_3_mod_8_primes(x, spf)) {
    bool ok = true;
    for (const auto& [r, e] :
         spf.factor(static_cast<std::uint32_t>((p - 1) / 2)))
      if (!member[r]) {
        ok = false;
        break;
      }
    if (ok) {
      member[p] = true;
      report.primes.push_back(p);
    }
  }
  return report;
}

struct ConjectureCounts {
  std::vector<std::uint64_t> xs;
  std::vector<std::uint64_t> p_infinity_counts;
  std::vector<std::vector<std::uint64_t>> level_counts;  // [level][grid index]
};

// Counting table for the filtration levels and their fixed point; nothing
// asserted beyond the nesting the construction guarantees.
inline ConjectureCounts conjecture_counts(const std::vector<std::uint64_t>& xs,
                                          std::int64_t max_level,
                                          const FactorBudget& budget = {}) {
  ConjectureCounts table;
  table.xs = xs;
  table.level_counts.resize(static_cast<std::size_t>(max_level) + 1);
  for (std::uint64_t x : xs) {
    table.p_infinity_counts.push_back(p_infinity(x, budget).primes.size());
    for (std::int64_t l = 0; l <= max_level; ++l)
      table.level_counts[static_cast<std::size_t>(l)].push_back(
          p_set(l, x, budget).primes.size());
  }
  return table;
}

}  // namespace novak
