#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/factorization.hpp"
#include "novak/natural.hpp"
#include "novak/parallel.hpp"
#include "novak/primality.hpp"
#include "novak/zsigmondy.hpp"

namespace novak {

// The defining predicate: n | 2^n + 1.  True for n = 1; even n > 1 can
// never divide the odd number 2^n + 1.
inline bool is_novak(const Natural& n) {
  if (n < 1) throw InvalidArgument("is_novak: n must be >= 1");
  if (n == 1) return true;
  if (n % 2 == 0) return false;
  return mod_pow(Natural(2), n, n) == n - 1;
}

inline bool is_novak_u64(std::uint64_t n) {
  if (n == 1) return true;
  if (n % 2 == 0) return false;
  return mod_pow_u64(2, n, n) == n - 1;
}

// A number that passed the predicate when constructed.
class NovakNumber {
 public:
  static NovakNumber verify(const Natural& n) {
    if (!is_novak(n))
      throw InvalidArgument("NovakNumber: " + n.str() +
                            " does not divide 2^n + 1");
    return NovakNumber(n);
  }

  const Natural& value() const { return value_; }
  bool verified() const { return true; }

  friend bool operator==(const NovakNumber& a, const NovakNumber& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const NovakNumber& a, const NovakNumber& b) {
    return a.value_ < b.value_;
  }

 private:
  explicit NovakNumber(Natural n) : value_(std::move(n)) {}
  Natural value_;
};

inline constexpr std::uint64_t kDefaultSizeCeilingBits = 1ull << 24;

// M = 2^N + 1, which inherits the property: M = Nk with k odd, and
// 2^M + 1 = (2^N + 1)(2^{N(k-1)} - ... + 1) = ML.
inline NovakNumber successor(const NovakNumber& n,
                             std::uint64_t size_ceiling_bits =
                                 kDefaultSizeCeilingBits) {
  if (!fits_u64(n.value()) || to_u64(n.value()) + 1 > size_ceiling_bits)
    throw SizeLimitExceeded("successor: 2^" + n.value().str() +
                            "+1 exceeds the size ceiling");
  return NovakNumber::verify(pow2p1(to_u64(n.value())));
}

// N * prod(p_i^alpha_i) for primes p_i | 2^N + 1 stays in the family.
inline NovakNumber extend(
    const NovakNumber& n,
    const std::vector<std::pair<Natural, std::uint32_t>>& exponents,
    std::uint64_t size_ceiling_bits = kDefaultSizeCeilingBits) {
  Natural result = n.value();
  for (const auto& [p, alpha] : exponents) {
    if (!is_prime(p))
      throw PreconditionViolation("extend: " + p.str() + " is not prime");
    if (mod_pow(Natural(2), n.value(), p) != p - 1)
      throw PreconditionViolation("extend: " + p.str() +
                                  " does not divide 2^n + 1");
    for (std::uint32_t i = 0; i < alpha; ++i) result *= p;
  }
  if (bit_length(result) > size_ceiling_bits)
    throw SizeLimitExceeded("extend: result exceeds the size ceiling");
  return NovakNumber::verify(result);
}

struct CombineResult {
  NovakNumber gcd;
  NovakNumber lcm;
  NovakNumber product;
};

// gcd, lcm and product of two members are members.
inline CombineResult combine(const NovakNumber& m, const NovakNumber& n) {
  auto [g, l] = gcd_lcm(m.value(), n.value());
  return {NovakNumber::verify(g), NovakNumber::verify(l),
          NovakNumber::verify(m.value() * n.value())};
}

struct CountingReport {
  Natural x;
  std::uint64_t count = 0;
  std::vector<NovakNumber> elements;

  std::vector<std::uint64_t> values_u64() const {
    std::vector<std::uint64_t> out;
    out.reserve(elements.size());
    for (const auto& e : elements) out.push_back(to_u64(e.value()));
    return out;
  }
};

// Exhaustive scan up to x; the oracle every other generator is tested
// against.  The default scan visits 1 and odd multiples of 3 only: any
// member n > 1 has smallest prime factor p with ord_p(2) | (2n, p-1) | 2,
// forcing p = 3.  full_scan audits that shortcut by visiting everything.
inline CountingReport enumerate_brute(std::uint64_t x, unsigned workers = 1,
                                      bool full_scan = false) {
  if (x < 1) throw InvalidArgument("enumerate_brute: x must be >= 1");
  CountingReport report;
  report.x = x;

  std::vector<std::vector<std::uint64_t>> found(std::max(1u, workers));
  if (full_scan) {
    parallel_chunks(1, x + 1, workers,
                    [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
                      for (std::uint64_t n = lo; n < hi; ++n)
                        if (is_novak_u64(n)) found[w].push_back(n);
                    });
  } else {
    // candidate j encodes n = 3(2j + 1)
    std::uint64_t candidates = x >= 3 ? (x / 3 + 1) / 2 : 0;
    parallel_chunks(0, candidates, workers,
                    [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
                      for (std::uint64_t j = lo; j < hi; ++j) {
                        std::uint64_t n = 3 * (2 * j + 1);
                        if (is_novak_u64(n)) found[w].push_back(n);
                      }
                    });
  }

  std::vector<std::uint64_t> all{1};
  for (auto& part : found) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  for (std::uint64_t n : all)
    report.elements.push_back(NovakNumber::verify(Natural(n)));
  report.count = report.elements.size();
  return report;
}

namespace detail {

// Primes p <= limit dividing 2^n + 1, by screening each candidate with a
// single modular exponentiation.  Complete for the requested range, so the
// closure generator cannot miss an extension for lack of factoring luck.
inline std::vector<std::uint64_t> extension_primes(
    std::uint64_t n, std::uint64_t limit,
    const std::vector<std::uint64_t>& primes) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : primes) {
    if (p > limit) break;
    if (p == 2) continue;
    if (mod_pow_u64(2, n % (p - 1), p) == p - 1) out.push_back(p);
  }
  return out;
}

}  // namespace detail

// Saturates {1, 3} under successor, combine and extend, pruned above x.
// Matches enumerate_brute whenever extension primes are fully harvested;
// the screening harvest used here is exhaustive below x, so the closure
// is complete by construction.
inline CountingReport enumerate_closure(std::uint64_t x,
                                        const FactorBudget& budget = {},
                                        unsigned workers = 1) {
  (void)workers;  // the worklist pass is cheap; scanning stays sequential
  if (x < 1) throw InvalidArgument("enumerate_closure: x must be >= 1");
  CountingReport report;
  report.x = x;

  std::vector<std::uint64_t> primes =
      x >= 9 ? primes_below(x / 3 + 1) : std::vector<std::uint64_t>{};

  std::set<std::uint64_t> members{1};
  std::vector<std::uint64_t> work;
  if (x >= 3) {
    members.insert(3);
    work.push_back(3);
  }
  while (!work.empty()) {
    std::uint64_t n = work.back();
    work.pop_back();

    std::vector<std::uint64_t> ext;
    if (n <= 62) {
      // 2^n + 1 fits a word: take its actual prime factorization.
      FactoredInteger fi = factorize(pow2p1(n), budget);
      for (const auto& f : fi.factors)
        if (fits_u64(f.prime) && to_u64(f.prime) <= x / n)
          ext.push_back(to_u64(f.prime));
      if (!fi.complete) {
        // fall back to screening below the pruning limit
        ext = detail::extension_primes(n, x / n, primes);
      }
    } else {
      ext = detail::extension_primes(n, x / n, primes);
    }
    for (std::uint64_t p : ext) {
      for (unsigned __int128 m = static_cast<unsigned __int128>(n) * p;
           m <= x; m *= p) {
        std::uint64_t v = static_cast<std::uint64_t>(m);
        if (members.insert(v).second) work.push_back(v);
      }
    }
    if (n <= 62) {
      Natural succ = pow2p1(n);
      if (succ <= x) {
        std::uint64_t v = to_u64(succ);
        if (members.insert(v).second) work.push_back(v);
      }
    }
  }

  // closure under gcd/lcm/product, pruned above x
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::uint64_t> snapshot(members.begin(), members.end());
    for (std::size_t i = 0; i < snapshot.size(); ++i) {
      for (std::size_t j = i; j < snapshot.size(); ++j) {
        std::uint64_t a = snapshot[i], b = snapshot[j];
        std::uint64_t g = std::gcd(a, b);
        std::uint64_t l = a / g * b;
        if (members.insert(g).second) changed = true;
        if (l <= x && members.insert(l).second) changed = true;
        unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
        if (prod <= x &&
            members.insert(static_cast<std::uint64_t>(prod)).second)
          changed = true;
      }
    }
  }

  for (std::uint64_t n : members)
    report.elements.push_back(NovakNumber::verify(Natural(n)));
  report.count = report.elements.size();
  return report;
}

// (ln(x/n) / n)^k: with k = omega(2^n + 1) this lower-bounds the count of
// members below x, by counting extension tuples n * p1^a1 ... pk^ak <= x.
inline double lemma6_bound(const Natural& x, const NovakNumber& n,
                           std::uint64_t k) {
  if (n.value() <= 1 || n.value() > x)
    throw InvalidArgument("lemma6_bound: need 1 < n <= x");
  if (k == 0) throw InvalidArgument("lemma6_bound: k must be positive");
  double xd = x.convert_to<double>();
  double nd = n.value().convert_to<double>();
  return std::pow(std::log(xd / nd) / nd, static_cast<double>(k));
}

// True when ceil(bound) <= count with the float comparison rounded
// outward, so ties lost to rounding cannot fail the inequality.
inline bool lemma6_holds(double bound, std::uint64_t count) {
  long double lo = static_cast<long double>(bound) * (1.0L - 1e-12L) - 1e-12L;
  long double c = std::ceil(lo);
  return c <= static_cast<long double>(count);
}

struct WitnessFamily {
  NovakNumber n;            // (2^(3^level) + 1)^k
  Natural omega_lower;      // (k+1)^level - 1
};

// The explicit family with abnormally many prime factors of 2^N + 1:
// N = (2^(3^level) + 1)^k has omega(2^N + 1) >= (k+1)^level - 1.
inline WitnessFamily witness_family(std::uint32_t level, std::uint32_t k,
                                    std::uint64_t size_ceiling_bits =
                                        kDefaultSizeCeilingBits) {
  if (level == 0 || k == 0)
    throw InvalidArgument("witness_family: level and k must be positive");
  std::uint64_t exponent = 1;
  for (std::uint32_t i = 0; i < level; ++i) {
    exponent *= 3;
    if (exponent > size_ceiling_bits)
      throw SizeLimitExceeded("witness_family: 3^level exceeds the ceiling");
  }
  if ((exponent + 1) * static_cast<std::uint64_t>(k) > size_ceiling_bits)
    throw SizeLimitExceeded("witness_family: result exceeds the ceiling");
  Natural base = pow2p1(exponent);
  Natural n = boost::multiprecision::pow(base, k);
  Natural omega_lower = boost::multiprecision::pow(Natural(k + 1), level) - 1;
  return {NovakNumber::verify(n), omega_lower};
}

struct DLowerResult {
  Natural value;          // best certified lower bound for d(x)
  NovakNumber witness;    // member achieving it
  bool exact = false;     // true when every 2^N+1 factored completely
};

// max over members N <= x of the best verified lower bound for
// omega(2^N + 1): the exact omega when 2^N + 1 factors completely within
// budget, else the tau-harvest count.
inline DLowerResult d_lower(std::uint64_t x, const FactorBudget& budget = {},
                            const FactorLookup* cache = nullptr,
                            unsigned workers = 1) {
  if (x < 3) throw InvalidArgument("d_lower: x must be >= 3");
  CountingReport all = enumerate_brute(x, workers);

  std::optional<DLowerResult> best;
  bool all_exact = true;
  for (const auto& member : all.elements) {
    std::uint64_t n = to_u64(member.value());
    Natural bound = 0;
    bool exact = false;
    if (n <= 128) {
      FactoredInteger fi = factorize_pow2p1(n, budget, cache);
      if (fi.complete) {
        bound = fi.omega();
        exact = true;
      }
    }
    if (!exact) {
      all_exact = false;
      try {
        OmegaLowerResult h = omega_lower_via_tau(member.value(), budget, cache);
        bound = std::max(bound, Natural(h.bound));
      } catch (const BudgetExceeded&) {
        // keep whatever partial bound we have
      }
    }
    if (!best || bound >= best->value)
      best = DLowerResult{bound, member, exact};
  }
  best->exact = all_exact;
  return *best;
}

struct Theorem1Parameters {
  std::int64_t level;  // tower depth n
  std::int64_t k;
};

// The parameter choice from the tower lower bound: k = [sqrt(lnln x)/2],
// n = [lnlnln x / (2 ln 3)].  Demonstration output only.
inline Theorem1Parameters theorem1_parameters(double x) {
  if (!(x > std::exp(1.0)))
    throw InvalidArgument("theorem1_parameters: x too small");
  double ll = std::log(std::log(x));
  double k = ll > 0 ? std::floor(std::sqrt(ll) / 2.0) : 0.0;
  double lll = ll > 0 ? std::log(ll) : 0.0;
  double n = lll > 0 ? std::floor(lll / (2.0 * std::log(3.0))) : 0.0;
  return {static_cast<std::int64_t>(n), static_cast<std::int64_t>(k)};
}

}  // namespace novak
