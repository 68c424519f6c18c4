#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "novak/arith.hpp"
#include "novak/orders.hpp"
#include "novak/primality.hpp"

using namespace novak;

namespace {

Natural naive_pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  Natural acc = 1 % Natural(m);
  for (std::uint64_t i = 0; i < e; ++i) acc = acc * b % m;
  return acc;
}

}  // namespace

TEST_CASE("mod_pow matches its examples") {
  CHECK(mod_pow(Natural(2), Natural(9), Natural(9)) == 8);
  CHECK(mod_pow(Natural(2), Natural(0), Natural(7)) == 1);
  CHECK(mod_pow(Natural(5), Natural(1), Natural(5)) == 0);
  CHECK_THROWS_AS(mod_pow(Natural(2), Natural(3), Natural(1)),
                  InvalidArgument);
  CHECK_THROWS_AS(mod_pow(Natural(2), Natural(3), Natural(0)),
                  InvalidArgument);
}

TEST_CASE("mod_pow handles negative bases and big operands") {
  // Euler criterion for -2 mod 11 (11 = 3 mod 8, so -2 is a QR)
  CHECK(mod_pow(Integer(-2), Natural(5), Natural(11)) == 1);
  Natural m = pow2p1(200);
  CHECK(mod_pow(Natural(2), Natural(200), m) == m - 1);
  // word-size modulus with a huge exponent
  CHECK(mod_pow(Natural(3), pow2p1(100), Natural(1000003)) ==
        mod_pow(Natural(3), pow2p1(100) % 1000002, Natural(1000003)));
}

TEST_CASE("mod_pow agrees with naive repeated multiplication") {
  std::mt19937_64 rng(20240811);
  std::uniform_int_distribution<std::uint64_t> val(0, 1 << 16);
  std::uniform_int_distribution<std::uint64_t> mod(2, 1 << 16);
  for (int i = 0; i < 5000; ++i) {
    std::uint64_t b = val(rng), e = val(rng) % 300, m = mod(rng);
    CAPTURE(b, e, m);
    REQUIRE(mod_pow(Natural(b), Natural(e), Natural(m)) ==
            naive_pow_mod(b, e, m));
  }
}

TEST_CASE("gcd_lcm conventions") {
  CHECK(gcd_lcm(Natural(6), Natural(342)) ==
        std::pair<Natural, Natural>(6, 342));
  CHECK(gcd_lcm(Natural(9), Natural(171)) ==
        std::pair<Natural, Natural>(9, 171));
  CHECK(gcd_lcm(Natural(0), Natural(5)) ==
        std::pair<Natural, Natural>(5, 0));
  CHECK(gcd_lcm(Natural(0), Natural(0)) ==
        std::pair<Natural, Natural>(0, 0));
}

TEST_CASE("gcd * lcm = m * n for nonzero pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> val(1, 1000000);
  for (int i = 0; i < 2000; ++i) {
    Natural m = val(rng), n = val(rng);
    auto [g, l] = gcd_lcm(m, n);
    REQUIRE(g * l == m * n);
    REQUIRE(m % g == 0);
    REQUIRE(l % m == 0);
  }
}

TEST_CASE("valuation") {
  CHECK(valuation(Natural(513), Natural(3)) == 3);
  CHECK(valuation(Natural(19), Natural(3)) == 0);
  CHECK(valuation(Natural(8), Natural(2)) == 3);
  CHECK_THROWS_AS(valuation(Natural(0), Natural(3)), InvalidArgument);
  CHECK_THROWS_AS(valuation(Natural(12), Natural(4)), InvalidArgument);
}

TEST_CASE("lte_check examples") {
  auto r = lte_check(Integer(2), Integer(-1), 3, Natural(3));
  CHECK(r.formula == 2);
  CHECK(r.direct == 2);

  r = lte_check(Integer(4), Integer(1), 1, Natural(3));
  CHECK(r.formula == 1);
  CHECK(r.direct == 1);

  r = lte_check(Integer(2), Integer(-1), 27, Natural(3));
  CHECK(r.formula == 4);
  CHECK(r.direct == 4);
}

TEST_CASE("lte_check rejects inputs outside the lemma") {
  CHECK_THROWS_AS(lte_check(Integer(2), Integer(1), 3, Natural(3)),
                  InvalidArgument);  // 3 does not divide a-b
  CHECK_THROWS_AS(lte_check(Integer(6), Integer(3), 2, Natural(3)),
                  InvalidArgument);  // 3 | ab
  CHECK_THROWS_AS(lte_check(Integer(5), Integer(1), 2, Natural(2)),
                  InvalidArgument);  // p = 2 out of scope
  CHECK_THROWS_AS(lte_check(Integer(10), Integer(1), 2, Natural(9)),
                  InvalidArgument);  // composite p
  CHECK_THROWS_AS(lte_check(Integer(4), Integer(4), 2, Natural(3)),
                  InvalidArgument);  // a = b
  CHECK_THROWS_AS(lte_check(Integer(4), Integer(1), 0, Natural(3)),
                  InvalidArgument);
}

TEST_CASE("lte_check equality on random valid tuples") {
  std::mt19937_64 rng(123456);
  std::vector<std::uint64_t> small_primes{3, 5, 7, 11, 13, 17, 19, 23, 29,
                                          31, 37, 41, 43, 47, 53, 59, 61,
                                          67, 71, 73, 79, 83, 89, 97};
  std::uniform_int_distribution<std::size_t> pick(0, small_primes.size() - 1);
  std::uniform_int_distribution<std::int64_t> coeff(-10000, 10000);
  std::uniform_int_distribution<std::uint64_t> kdist(1, 500);
  int done = 0;
  while (done < 2000) {
    std::uint64_t p = small_primes[pick(rng)];
    Integer a = coeff(rng);
    if (a % p == 0) continue;
    Integer b = a - Integer(p) * coeff(rng);
    if (b % p == 0 || b == a) continue;
    std::uint64_t k = kdist(rng);
    auto r = lte_check(a, b, k, Natural(p));
    CAPTURE(a.str(), b.str(), k, p);
    REQUIRE(r.formula == r.direct);
    ++done;
  }
}

TEST_CASE("multiplicative_order examples") {
  auto r = multiplicative_order(Natural(19), Natural(2), Natural(1));
  CHECK(r.order == 18);
  CHECK(r.two_adic == 1);
  CHECK(r.odd_part == 9);

  CHECK(multiplicative_order(Natural(3), Natural(2), Natural(1)).order == 2);
  CHECK(multiplicative_order(Natural(7), Natural(2), Natural(2)).order == 1);

  CHECK_THROWS_AS(multiplicative_order(Natural(7), Natural(14), Natural(1)),
                  InvalidArgument);
  CHECK_THROWS_AS(multiplicative_order(Natural(9), Natural(2), Natural(1)),
                  InvalidArgument);
}

TEST_CASE("multiplicative_order throws when p-1 resists the budget") {
  // 19 - 1 = 2 * 3^2, but a trial bound of 3 only strips the 2
  CHECK_THROWS_AS(multiplicative_order(Natural(19), Natural(2), Natural(1),
                                       FactorBudget{3, 0}),
                  BudgetExceeded);
}

TEST_CASE("order agrees with a brute-force scan for all p < 10^4") {
  auto primes = primes_below(10000);
  for (std::uint64_t p : primes) {
    if (p == 2) continue;
    auto rec = multiplicative_order(Natural(p), Natural(2), Natural(1));
    std::uint64_t brute = 1;
    std::uint64_t acc = 2 % p;
    while (acc != 1) {
      acc = mulmod_u64(acc, 2, p);
      ++brute;
    }
    CAPTURE(p);
    REQUIRE(rec.order == brute);
    REQUIRE((p - 1) % to_u64(rec.order) == 0);
    REQUIRE(rec.order ==
            Natural(rec.odd_part) * boost::multiprecision::pow(Natural(2),
                                                               rec.two_adic));
    REQUIRE(rec.odd_part % 2 == 1);
  }
}

TEST_CASE("order for random numerator/denominator pairs") {
  std::mt19937_64 rng(99);
  auto primes = primes_below(500);
  for (std::uint64_t p : primes) {
    if (p == 2) continue;
    std::uniform_int_distribution<std::uint64_t> dist(1, p - 1);
    for (int rep = 0; rep < 3; ++rep) {
      std::uint64_t a = dist(rng), b = dist(rng);
      auto rec = multiplicative_order(Natural(p), Natural(a), Natural(b));
      std::uint64_t k = to_u64(rec.order);
      REQUIRE(mod_pow_u64(a, k, p) == mod_pow_u64(b, k, p));
      for (std::uint64_t d = 1; d < k; ++d)
        if (k % d == 0)
          REQUIRE(mod_pow_u64(a, d, p) != mod_pow_u64(b, d, p));
    }
  }
}

TEST_CASE("primality regimes") {
  CHECK(check_prime(Natural(2)).prime);
  CHECK(check_prime(Natural(1000003)).prime);
  CHECK_FALSE(check_prime(Natural(1)).prime);
  CHECK_FALSE(check_prime(Natural("3317044064679887385961980")).prime);

  // below the deterministic threshold
  auto small = check_prime(Natural("18584774046020617"));
  CHECK(small.prime);
  CHECK(small.regime == PrimalityRegime::deterministic);

  // above it: a 32-digit prime from the primitive part of 2^171 + 1
  auto big = check_prime(Natural("19177458387940268116349766612211"));
  CHECK(big.prime);
  CHECK(big.regime == PrimalityRegime::probabilistic);

  // composite products of two large primes are rejected either way
  Natural composite = Natural("18584774046020617") * Natural("2796203");
  CHECK_FALSE(check_prime(composite).prime);
}

TEST_CASE("natural parsing round-trips decimal") {
  CHECK(parse_natural("0") == 0);
  CHECK(parse_natural("981723987123987129837198273").str() ==
        "981723987123987129837198273");
  CHECK_THROWS_AS(parse_natural(""), InvalidArgument);
  CHECK_THROWS_AS(parse_natural("12x"), InvalidArgument);
  CHECK_THROWS_AS(parse_natural("-3"), InvalidArgument);
  CHECK(parse_integer("-3") == -3);
}
