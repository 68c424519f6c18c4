#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/factorization.hpp"
#include "novak/natural.hpp"
#include "novak/novak_numbers.hpp"
#include "novak/orders.hpp"
#include "novak/parallel.hpp"
#include "novak/primality.hpp"

namespace novak {

// Membership criterion for primes dividing some member of the family.
//
// Write l = ord_q(2).  Then q divides a member N iff
//   (a) v_2(l) = 1, and
//   (b) every prime factor of l/2 itself divides some member.
//
// Forward: q | N | 2^N + 1 gives l | 2N, l not a divisor of N; N odd
// forces l = 2m with m odd and m | N, so each prime of m divides the
// member N.  Backward: let W_r be a member divisible by r for each prime
// r | m.  lcm of the W_r is a member (closure under lcm); multiplying by
// r while r divides 2^W + 1 (true whenever r | W) lifts each exponent
// until m | W*.  Then 2^m = -1 (mod q) since ord(2^m) = 2, and W*/m odd
// makes 2^{W*} = -1 (mod q), so W* q is a member divisible by q.
//
// The chain of strictly smaller certified primes plus the witness
// exponent map make each certificate verifiable with no external state.

struct CertificateStep {
  Natural q;
  Natural order;  // ord_q(2)
  std::vector<std::pair<Natural, std::uint32_t>> odd_part_factors;
  std::map<Natural, std::uint32_t> witness_exponents;

  Natural witness_value() const {
    Natural w = 1;
    for (const auto& [p, e] : witness_exponents)
      w *= boost::multiprecision::pow(p, e);
    return w;
  }
};

struct NovakPrimeCertificate {
  Natural q;
  OrderRecord order;
  std::vector<std::pair<Natural, std::uint32_t>> odd_part_factors;
  std::map<Natural, std::uint32_t> witness_exponents;
  std::vector<CertificateStep> chain;  // dependencies, ascending by q

  Natural witness_value() const {
    Natural w = 1;
    for (const auto& [p, e] : witness_exponents)
      w *= boost::multiprecision::pow(p, e);
    return w;
  }
};

namespace detail {

// One step of witness assembly, shared by the certifier and the sieve.
inline std::map<Natural, std::uint32_t> assemble_witness(
    const Natural& q,
    const std::vector<std::pair<Natural, std::uint32_t>>& m_factors,
    const std::map<Natural, std::map<Natural, std::uint32_t>>& sub_witnesses) {
  std::map<Natural, std::uint32_t> w;
  for (const auto& [r, e] : m_factors) {
    const auto& sub = sub_witnesses.at(r);
    for (const auto& [p, pe] : sub) {
      auto it = w.find(p);
      if (it == w.end())
        w.emplace(p, pe);
      else
        it->second = std::max(it->second, pe);
    }
  }
  for (const auto& [r, e] : m_factors) {
    auto it = w.find(r);
    if (it == w.end())
      w.emplace(r, e);
    else
      it->second = std::max(it->second, e);
  }
  w[q] += 1;
  return w;
}

// The witness must be a member divisible by q; checked prime power by
// prime power so the product is never reduced modulo anything large.
inline bool witness_is_member(const std::map<Natural, std::uint32_t>& w) {
  Natural value = 1;
  for (const auto& [p, e] : w) value *= boost::multiprecision::pow(p, e);
  for (const auto& [p, e] : w) {
    Natural pk = boost::multiprecision::pow(p, e);
    if (mod_pow(Natural(2), value, pk) != pk - 1) return false;
  }
  return true;
}

}  // namespace detail

using CertificateSet = std::map<Natural, NovakPrimeCertificate>;

// Applies the order criterion to q given every certified smaller prime.
// Returns a certificate, or nothing when q fails the criterion.
inline std::optional<NovakPrimeCertificate> is_novak_prime(
    const Natural& q, const CertificateSet& known,
    const FactorBudget& budget = {}, const FactorLookup* cache = nullptr) {
  if (q < 3 || !is_prime(q))
    throw InvalidArgument("is_novak_prime: q must be an odd prime");

  OrderRecord rec = multiplicative_order(q, Natural(2), Natural(1), budget,
                                         cache);
  if (rec.two_adic != 1) return std::nullopt;

  FactoredInteger mf = factorize(rec.odd_part, budget, cache);
  if (!mf.complete)
    throw BudgetExceeded("is_novak_prime: odd part of the order resisted "
                         "the factoring budget");

  std::vector<std::pair<Natural, std::uint32_t>> m_factors;
  for (const auto& f : mf.factors) m_factors.emplace_back(f.prime, f.exponent);

  std::map<Natural, std::map<Natural, std::uint32_t>> subs;
  std::map<Natural, NovakPrimeCertificate> deps;
  for (const auto& [r, e] : m_factors) {
    auto it = known.find(r);
    if (it == known.end()) return std::nullopt;
    subs.emplace(r, it->second.witness_exponents);
    deps.emplace(r, it->second);
  }

  NovakPrimeCertificate cert;
  cert.q = q;
  cert.order = rec;
  cert.odd_part_factors = m_factors;
  cert.witness_exponents = detail::assemble_witness(q, m_factors, subs);
  if (!detail::witness_is_member(cert.witness_exponents))
    throw CounterexampleError("is_novak_prime: assembled witness for " +
                              q.str() + " failed verification");

  // transitive dependency closure, ascending
  std::map<Natural, CertificateStep> steps;
  for (const auto& [r, dep] : deps) {
    for (const auto& s : dep.chain) steps.emplace(s.q, s);
    steps.emplace(r, CertificateStep{dep.q, dep.order.order,
                                     dep.odd_part_factors,
                                     dep.witness_exponents});
  }
  for (auto& [r, s] : steps) cert.chain.push_back(s);
  return cert;
}

// Full consistency check of a certificate using only its own contents.
inline bool verify_certificate(const NovakPrimeCertificate& cert) {
  std::set<Natural> certified;
  auto check_step = [&certified](const Natural& q, const Natural& order,
                                 const std::vector<std::pair<Natural, std::uint32_t>>&
                                     odd_factors,
                                 const std::map<Natural, std::uint32_t>& wit)
      -> bool {
    if (!check_prime(q).prime) return false;
    if (order % 2 != 0) return false;
    Natural m = order / 2;
    if (m % 2 == 0) return false;
    if ((q - 1) % order != 0) return false;
    if (mod_pow(Natural(2), order, q) != 1) return false;
    // minimality: dropping any prime of the order must break it
    Natural mprod = 1;
    for (const auto& [r, e] : odd_factors) {
      if (!check_prime(r).prime) return false;
      if (!certified.count(r)) return false;
      if (r >= q) return false;
      mprod *= boost::multiprecision::pow(r, e);
      if (mod_pow(Natural(2), order / r, q) == 1) return false;
    }
    if (mprod != m) return false;
    if (mod_pow(Natural(2), m, q) == 1) return false;
    // witness: divisible by q, covers m, and is a member
    auto itq = wit.find(q);
    if (itq == wit.end() || itq->second == 0) return false;
    for (const auto& [r, e] : odd_factors) {
      auto it = wit.find(r);
      if (it == wit.end() || it->second < e) return false;
    }
    return detail::witness_is_member(wit);
  };

  Natural prev = 0;
  for (const auto& s : cert.chain) {
    if (!(prev < s.q)) return false;  // ascending and duplicate-free
    prev = s.q;
    if (!(s.q < cert.q)) return false;
    if (!check_step(s.q, s.order, s.odd_part_factors, s.witness_exponents))
      return false;
    certified.insert(s.q);
  }
  if (cert.order.two_adic != 1) return false;
  return check_step(cert.q, cert.order.order, cert.odd_part_factors,
                    cert.witness_exponents);
}

struct SieveReport {
  std::uint64_t x = 0;
  std::vector<NovakPrimeCertificate> primes;  // ascending by q
  std::vector<std::uint64_t> undecided;       // budget casualties, never dropped
  std::uint64_t pi_n = 0;
  double ratio = 0.0;  // pi_n * ln^2 x / (x lnln x)
};

inline constexpr std::uint64_t kSieveBoundLimit = 100000000;

// Ascending certified sieve: order computations batch in parallel, the
// certification pass is sequential because chains reference smaller primes.
inline SieveReport sieve_novak_primes(std::uint64_t x,
                                      const FactorBudget& budget = {},
                                      unsigned workers = 1) {
  if (x < 1) throw InvalidArgument("sieve_novak_primes: x must be >= 1");
  if (x < 3) return SieveReport{x, {}, {}, 0, 0.0};  // no odd primes at all
  if (x > kSieveBoundLimit)
    throw InvalidArgument("sieve_novak_primes: bound exceeds the supported "
                          "sieve range");
  (void)budget;  // p-1 < x factors via the sieve table, never the budget

  SpfSieve spf(static_cast<std::uint32_t>(x + 1));
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 3; p <= x; p += 2)
    if (spf.is_prime(static_cast<std::uint32_t>(p))) primes.push_back(p);

  // parallel precompute of ord_p(2)
  std::vector<std::uint64_t> orders(primes.size());
  parallel_chunks(0, primes.size(), workers,
                  [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
                    for (std::uint64_t i = lo; i < hi; ++i) {
                      std::uint64_t p = primes[i];
                      auto fs = spf.factor(static_cast<std::uint32_t>(p - 1));
                      orders[i] = order_of_two_u64(p, fs);
                    }
                  });

  SieveReport report;
  report.x = x;
  std::map<Natural, std::map<Natural, std::uint32_t>> witnesses;
  std::map<Natural, CertificateStep> steps;  // all certified so far

  for (std::size_t i = 0; i < primes.size(); ++i) {
    std::uint64_t p = primes[i];
    std::uint64_t ell = orders[i];
    if (ell % 2 != 0) continue;
    std::uint64_t m = ell / 2;
    if (m % 2 == 0) continue;

    auto m_factors_u64 = spf.factor(static_cast<std::uint32_t>(m));
    bool all_known = true;
    for (const auto& [r, e] : m_factors_u64)
      if (!witnesses.count(Natural(r))) {
        all_known = false;
        break;
      }
    if (!all_known) continue;

    NovakPrimeCertificate cert;
    cert.q = p;
    cert.order.p = p;
    cert.order.base_num = 2;
    cert.order.base_den = 1;
    cert.order.order = ell;
    cert.order.two_adic = 1;
    cert.order.odd_part = m;
    for (const auto& [r, e] : m_factors_u64)
      cert.odd_part_factors.emplace_back(Natural(r), e);

    std::map<Natural, std::map<Natural, std::uint32_t>> subs;
    for (const auto& [r, e] : cert.odd_part_factors)
      subs.emplace(r, witnesses.at(r));
    cert.witness_exponents =
        detail::assemble_witness(cert.q, cert.odd_part_factors, subs);
    if (!detail::witness_is_member(cert.witness_exponents))
      throw CounterexampleError("sieve: witness assembly failed at " +
                                std::to_string(p));

    // the witness key set is exactly {q} plus the dependency closure
    for (const auto& [dep, e] : cert.witness_exponents)
      if (dep != cert.q) cert.chain.push_back(steps.at(dep));

    witnesses.emplace(cert.q, cert.witness_exponents);
    steps.emplace(cert.q, CertificateStep{cert.q, cert.order.order,
                                          cert.odd_part_factors,
                                          cert.witness_exponents});
    report.primes.push_back(std::move(cert));
  }

  report.pi_n = report.primes.size();
  double lx = std::log(static_cast<double>(x));
  report.ratio = static_cast<double>(report.pi_n) * lx * lx /
                 (static_cast<double>(x) * std::log(lx));
  return report;
}

// 9137 should be the seventh member of the prime family.
inline bool seventh_check() {
  SieveReport r = sieve_novak_primes(10000);
  return r.primes.size() == 7 && r.primes[6].q == 9137;
}

enum class FactorFlag { two, novak_prime, neither };

struct Table1Row {
  Natural p;
  std::vector<std::tuple<Natural, std::uint32_t, FactorFlag>> factors;
};

struct Table1Report {
  std::vector<Table1Row> rows;
};

// Factorizations of p-1 for the first 24 certified primes below 10^6,
// each factor flagged as 2, a certified prime, or neither.
inline Table1Report table1_report(const FactorBudget& budget = {},
                                  unsigned workers = 1) {
  SieveReport sr = sieve_novak_primes(1000000, budget, workers);
  std::set<Natural> member;
  for (const auto& c : sr.primes) member.insert(c.q);

  SpfSieve spf(1000001);
  Table1Report report;
  for (std::size_t i = 0; i < sr.primes.size() && i < 24; ++i) {
    Table1Row row;
    row.p = sr.primes[i].q;
    auto fs = spf.factor(static_cast<std::uint32_t>(to_u64(row.p) - 1));
    for (const auto& [f, e] : fs) {
      FactorFlag flag = FactorFlag::neither;
      if (f == 2)
        flag = FactorFlag::two;
      else if (member.count(Natural(f)))
        flag = FactorFlag::novak_prime;
      row.factors.emplace_back(Natural(f), e, flag);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct OrderStatistic {
  std::uint64_t x = 0;
  double L = 1.0;
  std::uint64_t count = 0;     // primes with ord_p(2) <= (p-1)/L
  std::uint64_t pi = 0;        // all primes <= x
  double fraction = 0.0;       // count / pi
  bool within_lemma_range = true;
};

// Empirical tail of small multiplicative orders; reported, not asserted.
// p = 2 is excluded from the count (2 divides the base) but counts in pi.
inline OrderStatistic order_statistic(std::uint64_t x, double L,
                                      unsigned workers = 1) {
  if (x < 3) throw InvalidArgument("order_statistic: x must be >= 3");
  if (x > kSieveBoundLimit)
    throw InvalidArgument("order_statistic: bound exceeds the supported "
                          "sieve range");
  if (L < 1.0) throw InvalidArgument("order_statistic: L must be >= 1");

  SpfSieve spf(static_cast<std::uint32_t>(x + 1));
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 3; p <= x; p += 2)
    if (spf.is_prime(static_cast<std::uint32_t>(p))) primes.push_back(p);

  std::vector<std::uint64_t> partial(std::max(1u, workers), 0);
  parallel_chunks(0, primes.size(), workers,
                  [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
                    for (std::uint64_t i = lo; i < hi; ++i) {
                      std::uint64_t p = primes[i];
                      auto fs = spf.factor(static_cast<std::uint32_t>(p - 1));
                      std::uint64_t ell = order_of_two_u64(p, fs);
                      if (static_cast<long double>(ell) * L <=
                          static_cast<long double>(p - 1))
                        ++partial[w];
                    }
                  });

  OrderStatistic st;
  st.x = x;
  st.L = L;
  for (std::uint64_t c : partial) st.count += c;
  st.pi = primes.size() + 1;  // p = 2
  st.fraction = static_cast<double>(st.count) / static_cast<double>(st.pi);
  double lx = std::log(static_cast<double>(x));
  st.within_lemma_range = L >= 1.0 && L <= lx / std::log(lx);
  return st;
}

}  // namespace novak
