#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "novak/arith.hpp"
#include "novak/errors.hpp"
#include "novak/natural.hpp"
#include "novak/parallel.hpp"
#include "novak/primality.hpp"

namespace novak {

// A pluggable integer sequence n -> u_n.  The built-in family is
// u_n = a^n + sign * b^n with integer a, b; anything else goes through the
// custom evaluator hook and loses the fast modular path.
struct DivSeqSpec {
  std::string name;
  Integer a = 2;
  Integer b = 1;
  int sign = -1;  // -1: a^n - b^n, +1: a^n + b^n
  double growth_base = 3.0;
  bool weak_growth = false;  // growth budget a^(n^2) instead of a^n
  std::function<Integer(std::uint64_t)> custom;

  static DivSeqSpec family(const Integer& a, const Integer& b, int sign,
                           std::optional<double> growth = std::nullopt) {
    if (sign != 1 && sign != -1)
      throw InvalidArgument("DivSeqSpec: sign must be +1 or -1");
    DivSeqSpec s;
    s.a = a;
    s.b = b;
    s.sign = sign;
    std::ostringstream nm;
    nm << a << "^n" << (sign > 0 ? "+" : "-");
    if (b < 0) nm << "(" << b << ")^n";
    else nm << b << "^n";
    s.name = nm.str();
    double mag = boost::multiprecision::abs(a).convert_to<double>() +
                 boost::multiprecision::abs(b).convert_to<double>();
    s.growth_base = growth.value_or(mag);
    return s;
  }

  bool is_family() const { return !custom; }

  Integer evaluate(std::uint64_t n) const {
    if (n == 0) throw InvalidArgument("DivSeqSpec: n must be >= 1");
    if (custom) return custom(n);
    Integer an = boost::multiprecision::pow(a, static_cast<unsigned>(n));
    Integer bn = boost::multiprecision::pow(b, static_cast<unsigned>(n));
    return sign > 0 ? Integer(an + bn) : Integer(an - bn);
  }

  // u_n mod m without forming u_n; family specs only.
  Natural evaluate_mod_big(const Natural& n, const Natural& m) const {
    if (!is_family())
      throw InvalidArgument("DivSeqSpec: no modular path for custom "
                            "evaluators");
    if (n < 1) throw InvalidArgument("DivSeqSpec: n must be >= 1");
    if (m == 1) return Natural(0);
    Natural an = mod_pow(a, n, m);
    Natural bn = mod_pow(b, n, m);
    Natural r = sign > 0 ? Natural(an + bn) : Natural(an + m - bn);
    return r % m;
  }

  Natural evaluate_mod(std::uint64_t n, const Natural& m) const {
    return evaluate_mod_big(Natural(n), m);
  }
};

enum class AxiomVerdict { pass, fail, vacuous };

struct AxiomOutcome {
  AxiomVerdict verdict = AxiomVerdict::pass;
  std::string counterexample;  // set on fail
};

struct AxiomReport {
  std::string spec_name;
  std::uint64_t bound = 0;
  AxiomOutcome divisibility;
  AxiomOutcome lte;
  AxiomOutcome zsigmondy;
  AxiomOutcome growth;
  AxiomOutcome nondegeneracy;
  std::vector<std::uint64_t> zsigmondy_exceptions;
  std::uint64_t truncated_at = 0;  // 0: full range checked

  bool all_pass() const {
    auto ok = [](const AxiomOutcome& o) {
      return o.verdict != AxiomVerdict::fail;
    };
    return ok(divisibility) && ok(lte) && ok(zsigmondy) && ok(growth) &&
           ok(nondegeneracy);
  }
};

namespace detail {

inline double approx_log2(const Integer& v) {
  Natural u = boost::multiprecision::abs(v);
  if (u <= 1) return 0.0;
  std::size_t bits = bit_length(u);
  if (bits <= 53) return std::log2(u.convert_to<double>());
  Natural top = u >> (bits - 53);
  return std::log2(top.convert_to<double>()) +
         static_cast<double>(bits - 53);
}

}  // namespace detail

// Checks the five sequence axioms over n <= bound.  The primitive-prime
// axiom reports its observed exception set rather than claiming finiteness;
// testing a prefix cannot decide that.
inline AxiomReport check_axioms(const DivSeqSpec& spec, std::uint64_t bound,
                                std::uint64_t size_ceiling_bits = 1u << 20) {
  if (bound < 2) throw InvalidArgument("check_axioms: bound must be >= 2");
  AxiomReport report;
  report.spec_name = spec.name;
  report.bound = bound;

  std::vector<Integer> u(bound + 1);
  std::uint64_t top = bound;
  for (std::uint64_t n = 1; n <= bound; ++n) {
    u[n] = spec.evaluate(n);
    if (bit_length(boost::multiprecision::abs(u[n])) > size_ceiling_bits) {
      top = n - 1;
      report.truncated_at = n;
      break;
    }
  }
  if (top < 2) throw SizeLimitExceeded("check_axioms: sequence too large "
                                       "even at n = 2");

  // 1: n | m implies u_n | u_m
  for (std::uint64_t n = 1;
       n <= top && report.divisibility.verdict == AxiomVerdict::pass; ++n) {
    for (std::uint64_t m = 2 * n; m <= top; m += n) {
      if (u[n] == 0 ? u[m] != 0 : u[m] % u[n] != 0) {
        report.divisibility = {AxiomVerdict::fail,
                               "(n=" + std::to_string(n) +
                                   ", m=" + std::to_string(m) + ")"};
        break;
      }
    }
  }

  // 2: p | u_n implies p u_n | u_{pn}
  bool lte_instance = false;
  for (std::uint64_t n = 1;
       n <= top && report.lte.verdict == AxiomVerdict::pass; ++n) {
    if (u[n] == 0) continue;
    for (std::uint64_t p = 2; p * n <= top; ++p) {
      if (!is_prime_u64(p)) continue;
      if (u[n] % p != 0) continue;
      lte_instance = true;
      if (u[p * n] % (u[n] * p) != 0) {
        report.lte = {AxiomVerdict::fail,
                      "(p=" + std::to_string(p) + ", n=" + std::to_string(n) +
                          ")"};
        break;
      }
    }
  }
  if (report.lte.verdict == AxiomVerdict::pass && !lte_instance)
    report.lte.verdict = AxiomVerdict::vacuous;

  // 3: a primitive prime for each n, with the observed exceptions listed
  for (std::uint64_t n = 1; n <= top; ++n) {
    Natural part = boost::multiprecision::abs(u[n]);
    if (part <= 1) {
      if (n > 1) report.zsigmondy_exceptions.push_back(n);
      continue;
    }
    for (std::uint64_t k = 1; k < n; ++k) {
      Natural earlier = boost::multiprecision::abs(u[k]);
      if (earlier <= 1) continue;
      Natural g = boost::multiprecision::gcd(part, earlier);
      while (g > 1) {
        part /= g;
        g = boost::multiprecision::gcd(part, earlier);
      }
      if (part == 1) break;
    }
    if (part == 1) report.zsigmondy_exceptions.push_back(n);
  }

  // 4: |u_n| within the declared growth budget
  for (std::uint64_t n = 1;
       n <= top && report.growth.verdict == AxiomVerdict::pass; ++n) {
    double budget_exp = spec.weak_growth
                            ? static_cast<double>(n) * static_cast<double>(n)
                            : static_cast<double>(n);
    double allowed = budget_exp * std::log2(spec.growth_base);
    if (detail::approx_log2(u[n]) > allowed + 1e-9) {
      report.growth = {AxiomVerdict::fail, "(n=" + std::to_string(n) + ")"};
    }
  }

  // 5: u_1 != +-1
  if (u[1] == 1 || u[1] == -1)
    report.nondegeneracy = {AxiomVerdict::fail, "u_1 = " + u[1].str()};

  return report;
}

struct SelfDivisorReport {
  std::vector<std::uint64_t> values;  // sorted members of {n : n | u_n}
  std::uint64_t count = 0;
  std::vector<std::uint64_t> skipped;  // ns the ceiling made undecidable
};

// {n <= x : n | u_n} by direct divisibility, modular for family specs,
// exact (ceiling-guarded) otherwise.
inline SelfDivisorReport self_divisors(const DivSeqSpec& spec, std::uint64_t x,
                                       unsigned workers = 1,
                                       std::uint64_t size_ceiling_bits =
                                           1u << 20) {
  if (x < 1) throw InvalidArgument("self_divisors: x must be >= 1");
  SelfDivisorReport report;

  if (spec.is_family()) {
    std::vector<std::vector<std::uint64_t>> found(std::max(1u, workers));
    parallel_chunks(1, x + 1, workers,
                    [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
                      for (std::uint64_t n = lo; n < hi; ++n)
                        if (n == 1 || spec.evaluate_mod(n, Natural(n)) == 0)
                          found[w].push_back(n);
                    });
    for (auto& part : found)
      report.values.insert(report.values.end(), part.begin(), part.end());
    std::sort(report.values.begin(), report.values.end());
  } else {
    for (std::uint64_t n = 1; n <= x; ++n) {
      Integer un;
      try {
        un = spec.evaluate(n);
      } catch (const SizeLimitExceeded&) {
        report.skipped.push_back(n);
        continue;
      }
      if (bit_length(boost::multiprecision::abs(un)) > size_ceiling_bits) {
        report.skipped.push_back(n);
        continue;
      }
      if (un % Integer(n) == 0) report.values.push_back(n);
    }
  }
  report.count = report.values.size();
  return report;
}

// Members of {n : n | u_n} grown by the closure machinery: seed with 1,
// then repeatedly multiply a member N by prime factors p of u_N (p | u_N
// and N | u_N give Np | p u_N | u_{Np}).  Difference-family specs only.
inline std::vector<Natural> generalized_witnesses(const DivSeqSpec& spec,
                                                  std::uint32_t depth,
                                                  std::uint64_t harvest_bound =
                                                      100000,
                                                  std::uint64_t size_ceiling_bits =
                                                      4096) {
  if (!spec.is_family() || spec.sign != -1)
    throw InvalidArgument("generalized_witnesses: difference family only");
  Integer d = spec.a - spec.b;
  if (boost::multiprecision::abs(d) < 2)
    throw InvalidArgument("generalized_witnesses: |a - b| must be >= 2");
  if (boost::multiprecision::gcd(boost::multiprecision::abs(spec.a),
                                 boost::multiprecision::abs(spec.b)) != 1)
    throw InvalidArgument("generalized_witnesses: a, b must be coprime");

  std::vector<std::uint64_t> primes = primes_below(harvest_bound);
  std::set<Natural> members{Natural(1)};
  std::vector<Natural> frontier{Natural(1)};
  for (std::uint32_t round = 0; round < depth && !frontier.empty(); ++round) {
    std::vector<Natural> next;
    for (const Natural& n : frontier) {
      for (std::uint64_t p : primes) {
        if (spec.evaluate_mod_big(n, Natural(p)) != 0) continue;
        Natural grown = n * p;
        if (bit_length(grown) > size_ceiling_bits) continue;
        if (members.insert(grown).second) next.push_back(grown);
      }
    }
    frontier = std::move(next);
  }

  std::vector<Natural> out(members.begin(), members.end());
  for (const Natural& n : out) {
    if (n > 1 && spec.evaluate_mod_big(n, n) != 0)
      throw CounterexampleError("generalized_witnesses: " + n.str() +
                                " fails n | u_n");
  }
  return out;
}

}  // namespace novak
