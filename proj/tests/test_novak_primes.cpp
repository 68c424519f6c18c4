#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "novak/novak_primes.hpp"
#include "table1_data.hpp"

using namespace novak;

TEST_CASE("membership criterion on the first few primes") {
  CertificateSet known;

  auto c3 = is_novak_prime(Natural(3), known);
  REQUIRE(c3.has_value());
  CHECK(c3->order.order == 2);
  CHECK(c3->odd_part_factors.empty());
  CHECK(c3->witness_value() == 3);
  known.emplace(Natural(3), *c3);

  CHECK_FALSE(is_novak_prime(Natural(5), known).has_value());
  CHECK_FALSE(is_novak_prime(Natural(7), known).has_value());

  auto c19 = is_novak_prime(Natural(19), known);
  REQUIRE(c19.has_value());
  CHECK(c19->order.order == 18);
  REQUIRE(c19->odd_part_factors.size() == 1);
  CHECK(c19->odd_part_factors[0].first == 3);
  CHECK(c19->odd_part_factors[0].second == 2);
  CHECK(c19->witness_value() == 171);
  CHECK(c19->witness_exponents ==
        std::map<Natural, std::uint32_t>{{Natural(3), 2}, {Natural(19), 1}});

  CHECK_THROWS_AS(is_novak_prime(Natural(4), known), InvalidArgument);
}

TEST_CASE("criterion needs its smaller primes") {
  CertificateSet empty;
  CHECK_FALSE(is_novak_prime(Natural(19), empty).has_value());
}

TEST_CASE("criterion propagates factoring failures as budget errors") {
  CertificateSet known;
  CHECK_THROWS_AS(is_novak_prime(Natural(19), known, FactorBudget{3, 0}),
                  BudgetExceeded);
}

TEST_CASE("sieve golden prefixes") {
  CHECK(sieve_novak_primes(2).primes.empty());
  CHECK(sieve_novak_primes(2).pi_n == 0);

  auto s10 = sieve_novak_primes(10);
  REQUIRE(s10.primes.size() == 1);
  CHECK(s10.primes[0].q == 3);

  auto s1e4 = sieve_novak_primes(10000);
  std::vector<Natural> expected{Natural(3),    Natural(19),  Natural(163),
                                Natural(571),  Natural(1459), Natural(8803),
                                Natural(9137)};
  REQUIRE(s1e4.primes.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(s1e4.primes[i].q == expected[i]);
  CHECK(s1e4.undecided.empty());

  CHECK(sieve_novak_primes(9136).primes.size() == 6);
  CHECK(seventh_check());
}

TEST_CASE("sieve results nest as the bound grows") {
  auto a = sieve_novak_primes(1000);
  auto b = sieve_novak_primes(10000);
  auto c = sieve_novak_primes(100000);
  REQUIRE(a.primes.size() <= b.primes.size());
  REQUIRE(b.primes.size() <= c.primes.size());
  for (std::size_t i = 0; i < a.primes.size(); ++i)
    CHECK(a.primes[i].q == b.primes[i].q);
  for (std::size_t i = 0; i < b.primes.size(); ++i)
    CHECK(b.primes[i].q == c.primes[i].q);
}

TEST_CASE("every certified prime is 1 or 3 mod 8") {
  for (const auto& cert : sieve_novak_primes(100000).primes) {
    std::uint64_t r = to_u64(cert.q % 8);
    CAPTURE(cert.q.str());
    REQUIRE((r == 1 || r == 3));
  }
}

TEST_CASE("certificates verify self-contained and reject tampering") {
  auto report = sieve_novak_primes(100000);
  for (const auto& cert : report.primes) {
    CAPTURE(cert.q.str());
    REQUIRE(verify_certificate(cert));
  }

  // tamper in several distinct ways
  auto cert = report.primes[6];  // 9137
  REQUIRE(cert.q == 9137);

  auto wrong_order = cert;
  wrong_order.order.order *= 2;
  CHECK_FALSE(verify_certificate(wrong_order));

  auto wrong_witness = cert;
  wrong_witness.witness_exponents.erase(Natural(9137));
  CHECK_FALSE(verify_certificate(wrong_witness));

  auto broken_chain = cert;
  broken_chain.chain.erase(broken_chain.chain.begin());  // drop prime 3
  CHECK_FALSE(verify_certificate(broken_chain));

  auto swapped = cert;
  std::swap(swapped.chain[0], swapped.chain[1]);  // break ascending order
  CHECK_FALSE(verify_certificate(swapped));
}

TEST_CASE("witnesses are members divisible by their prime") {
  for (const auto& cert : sieve_novak_primes(100000).primes) {
    Natural w = cert.witness_value();
    CAPTURE(cert.q.str(), w.str());
    REQUIRE(w % cert.q == 0);
    REQUIRE(is_novak(w));
  }
}

TEST_CASE("primes visible in the enumeration are all certified") {
  // subset check: a member's prime factors below 10^4 must appear in the
  // sieve; equality is not expected because small multiples may exceed
  // the enumeration range
  auto members = enumerate_brute(10000000, 4);
  std::set<std::uint64_t> visible;
  for (const auto& m : members.elements) {
    std::uint64_t n = to_u64(m.value());
    for (std::uint64_t p = 3; p * p <= n; p += 2) {
      while (n % p == 0) {
        if (p <= 10000) visible.insert(p);
        n /= p;
      }
    }
    if (n > 1 && n <= 10000) visible.insert(n);
  }
  std::set<std::uint64_t> certified;
  for (const auto& cert : sieve_novak_primes(10000).primes)
    certified.insert(to_u64(cert.q));
  for (std::uint64_t p : visible) {
    CAPTURE(p);
    REQUIRE(certified.count(p) == 1);
  }
  CHECK(visible == std::set<std::uint64_t>{3, 19, 163, 571, 1459});
}

TEST_CASE("table1_report matches the golden table") {
  auto report = table1_report();
  const auto& golden = table1::rows();
  REQUIRE(report.rows.size() == golden.size());
  for (std::size_t i = 0; i < golden.size(); ++i) {
    CAPTURE(i, golden[i].p);
    REQUIRE(report.rows[i].p == golden[i].p);
    REQUIRE(report.rows[i].factors.size() == golden[i].factors.size());
    for (std::size_t j = 0; j < golden[i].factors.size(); ++j) {
      auto [prime, exponent, flag] = report.rows[i].factors[j];
      REQUIRE(prime == golden[i].factors[j].prime);
      REQUIRE(exponent == golden[i].factors[j].exponent);
      bool bold = flag != FactorFlag::neither;
      REQUIRE(bold == golden[i].factors[j].bold);
      if (prime == 2) REQUIRE(flag == FactorFlag::two);
    }
  }
}

TEST_CASE("the sieve extends one prime past the golden table below 10^6") {
  auto report = sieve_novak_primes(1000000);
  REQUIRE(report.pi_n == 25);
  CHECK(report.primes[24].q == 944803);
  CHECK(report.ratio == Catch::Approx(0.0018172454081848957).epsilon(1e-12));
}

TEST_CASE("order statistic diagnostics") {
  auto full = order_statistic(10000, 1.0);
  CHECK(full.pi == 1229);
  // every odd prime satisfies ord <= p-1; only p = 2 is excluded
  CHECK(full.count == 1228);
  CHECK(full.within_lemma_range);

  auto half = order_statistic(10000, 2.0);
  CHECK(half.count == 758);
  CHECK(half.count < full.count);

  auto tail = order_statistic(100000, 10.0);
  CHECK(tail.count == 1000);
  CHECK(tail.fraction == Catch::Approx(0.1042535446205171).epsilon(1e-12));

  // outside the stated range: still computed, but flagged
  auto wide = order_statistic(10000, 500.0);
  CHECK_FALSE(wide.within_lemma_range);
  CHECK(wide.count <= tail.count + full.count);  // computed, sane

  CHECK_THROWS_AS(order_statistic(10000, 0.5), InvalidArgument);
}

TEST_CASE("order statistic count is non-increasing in L") {
  std::uint64_t prev = order_statistic(20000, 1.0).count;
  for (double L : {1.5, 2.0, 4.0, 8.0, 16.0}) {
    std::uint64_t cur = order_statistic(20000, L).count;
    CAPTURE(L);
    REQUIRE(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("order statistic workers agree") {
  auto seq = order_statistic(50000, 3.0, 1);
  auto par = order_statistic(50000, 3.0, 4);
  CHECK(seq.count == par.count);
}
