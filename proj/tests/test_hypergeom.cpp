#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyp/hypergeom.hpp"

#include <numeric>
#include <random>

using namespace hyp;

namespace {

HypergeomParams example38() {
  return HypergeomParams({Rational(1, 5), Rational(2, 5), Rational(3, 5)},
                         {Rational(4, 5), Rational(1, 2)});
}

Rational random_unit_fraction(std::mt19937_64& rng, long max_den) {
  std::uniform_int_distribution<long> den(2, max_den);
  while (true) {
    const long d = den(rng);
    std::uniform_int_distribution<long> num(1, d - 1);
    const long n = num(rng);
    if (std::gcd(n, d) == 1) return Rational(n, d);
  }
}

}  // namespace

TEST_CASE("rising_factorial") {
  CHECK(rising_factorial(Rational(1, 2), 3) == Rational(15, 8));
  CHECK(rising_factorial(Rational(9, 7), 0) == 1);
  CHECK(rising_factorial(Rational(-2), 3) == 0);
}

TEST_CASE("parameter validation and cancellation") {
  CHECK_THROWS_AS(HypergeomParams({Rational(1, 2)}, {Rational(-3)}), std::invalid_argument);
  CHECK_THROWS_AS(HypergeomParams({Rational(1, 2)}, {Rational(0)}), std::invalid_argument);

  const HypergeomParams cancelled({Rational(1, 2), Rational(1, 3)}, {Rational(1, 2)});
  CHECK(cancelled.m() == 1);
  CHECK(cancelled.n() == 0);
  CHECK(cancelled.alpha() == std::vector<Rational>{Rational(1, 3)});

  // normalized copies live in (0,1], originals are preserved
  const HypergeomParams shifted({Rational(7, 5), Rational(3)}, {Rational(-1, 2)});
  CHECK(shifted.normalized_alpha() == std::vector<Rational>{Rational(2, 5), Rational(1)});
  CHECK(shifted.normalized_beta() == std::vector<Rational>{Rational(1, 2)});
  CHECK(shifted.alpha().front() == Rational(7, 5));
  CHECK(shifted.modulus() == 10);

  const HypergeomParams terminating({Rational(-2), Rational(1, 2)}, {Rational(1, 3)});
  CHECK(terminating.terminating());
}

TEST_CASE("coefficients") {
  const HypergeomParams gauss({Rational(1, 2), Rational(1, 2)}, {Rational(1)});
  CHECK(coefficient(gauss, 0) == 1);
  CHECK(coefficient(gauss, 1) == Rational(1, 4));

  const QuadraticHGParams quad(Rational(1, 2), Rational(1), Rational(1, 3), Rational(2));
  CHECK(coefficient(quad, 0) == 1);
  CHECK(coefficient(quad, 1) == Rational(-21, 4));
}

TEST_CASE("coefficient sequence matches direct products") {
  const HypergeomParams params = example38();
  CoefficientSequence seq(params);
  for (unsigned long k = 0; k <= 40; ++k) {
    CHECK(seq.value() == coefficient(params, k));
    seq.advance();
  }
  const QuadraticHGParams quad(Rational(1, 3), Rational(1, 2), Rational(5, 6),
                               Rational(-3));
  CoefficientSequence qseq(quad);
  for (unsigned long k = 0; k <= 40; ++k) {
    CHECK(qseq.value() == coefficient(quad, k));
    qseq.advance();
  }
}

TEST_CASE("quadratic parameter validation") {
  CHECK_THROWS_AS(QuadraticHGParams(Rational(1, 2), Rational(0), Rational(1, 3), Rational(2)),
                  std::invalid_argument);  // b = 0
  CHECK_THROWS_AS(QuadraticHGParams(Rational(1, 2), Rational(1), Rational(-2), Rational(2)),
                  std::invalid_argument);  // c nonpositive integer
  CHECK_THROWS_AS(QuadraticHGParams(Rational(1, 2), Rational(1), Rational(1, 3), Rational(9, 4)),
                  std::invalid_argument);  // square D

  const QuadraticHGParams q(Rational(1, 3), Rational(1), Rational(5, 6), Rational(-3));
  CHECK(q.kernel() == -3);
  CHECK(q.discriminant() == -3);
  CHECK_FALSE(q.integral_trace());
  CHECK(q.trace_fraction() == Rational(2, 3));

  const QuadraticHGParams half(Rational(1, 2), Rational(2, 3), Rational(5, 6), Rational(8));
  CHECK(half.kernel() == 2);
  CHECK(half.discriminant() == 8);
  CHECK(half.integral_trace());
  CHECK(half.trace_fraction() == 1);
  CHECK(half.root_scale() == 2);  // sqrt(8) = 2 sqrt(2)
}

TEST_CASE("carry_count on rational expansions") {
  const RationalExpansion e = rational_expansion(Rational(-4, 5), 3);
  const CarryCount one = carry_count(e, 2);
  CHECK_FALSE(one.infinite);
  CHECK(one.count == 1);

  const RationalExpansion zero = rational_expansion(Rational(0), 5);
  const CarryCount none = carry_count(zero, 123456);
  CHECK(none.count == 0);

  const RationalExpansion minus_two = rational_expansion(Rational(-2), 7);
  CHECK(carry_count(minus_two, 5).infinite);       // -2 + 5 >= 0
  CHECK_FALSE(carry_count(minus_two, 1).infinite); // -2 + 1 < 0
  CHECK(carry_count(minus_two, 1).count == 0);
}

TEST_CASE("carry counts equal binomial valuations") {
  // nu_p(binom(x+k, k)) with the binomial expanded as (x+1)_k / k!
  for (long v = 2; v <= 6; ++v) {
    for (long u = 1; u < v; ++u) {
      if (std::gcd(u, v) != 1) continue;
      const Rational x(-u, v);
      for (long p : {2L, 3L, 5L, 7L, 11L}) {
        if (v % p == 0) continue;
        const RationalExpansion e = rational_expansion(x, p);
        Rational binom = 1;
        for (long k = 1; k <= 120; ++k) {
          binom *= (x + k) / Rational(k);
          const CarryCount c = carry_count(e, k);
          REQUIRE_FALSE(c.infinite);
          CHECK(static_cast<long>(c.count) == valuation(binom, p));
        }
      }
    }
  }
}

TEST_CASE("carry count is locally constant within its inspection horizon") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const long p = std::vector<long>{3, 5, 7}[rng() % 3];
    const Rational x(static_cast<long>(rng() % 200) - 100,
                     std::vector<long>{7, 11, 13, 9}[rng() % 4] + (p == 7 ? 4 : 0));
    Rational xr = x;
    xr.canonicalize();
    if (mpz_divisible_ui_p(xr.get_den_mpz_t(), static_cast<unsigned long>(p))) continue;
    const mpz_class k(static_cast<long>(rng() % 4000));
    const RationalExpansion e = rational_expansion(xr, p);
    const CarryCount base = carry_count(e, k);
    if (base.infinite) continue;
    mpz_class shift;
    mpz_pow_ui(shift.get_mpz_t(), mpz_class(p).get_mpz_t(),
               static_cast<unsigned long>(base.digits_inspected));
    const Rational y = xr + Rational(shift) * Rational(1 + static_cast<long>(rng() % 5));
    const CarryCount moved = carry_count(rational_expansion(y, p), k);
    CHECK_FALSE(moved.infinite);
    CHECK(moved.count == base.count);
  }
}

TEST_CASE("valuation formula on the running 3F2") {
  const HypergeomParams params = example38();
  const RationalTermValuation at11(params, 11);
  CHECK(at11.at(0) == Valuation{false, 0});
  for (long k = 0; k <= 500; ++k) {
    const Valuation v = at11.at(k);
    REQUIRE_FALSE(v.infinite);
    CHECK(v.value >= 0);
  }
  const RationalTermValuation at13(params, 13);
  bool negative = false;
  for (long k = 0; k <= 500 && !negative; ++k) negative = at13.at(k).value < 0;
  CHECK(negative);
}

TEST_CASE("valuation formula equals the exact oracle") {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<Rational> alpha, beta;
    for (std::size_t i = 0; i <= n; ++i) alpha.push_back(random_unit_fraction(rng, 12));
    for (std::size_t i = 0; i + 1 <= n; ++i) beta.push_back(random_unit_fraction(rng, 12));
    const HypergeomParams params(alpha, beta);
    for (long p : primes_up_to(50)) {
      if (!is_good_prime(params, p)) continue;
      const RationalTermValuation engine(params, p);
      CoefficientSequence seq(params);
      for (unsigned long k = 0; k <= 60; ++k) {
        const Valuation direct{seq.value() == 0, seq.value() == 0 ? 0 : valuation(seq.value(), p)};
        CHECK(engine.at(mpz_class(static_cast<long>(k))) == direct);
        seq.advance();
      }
    }
  }
}

TEST_CASE("quadratic valuation formula equals the exact oracle") {
  const struct {
    long an, ad, bn, bd, cn, cd, d;
  } cases[] = {
      {1, 3, 1, 1, 5, 6, -3}, {1, 2, 1, 1, 1, 3, 2},  {2, 5, 1, 2, 3, 4, 5},
      {1, 3, 2, 3, 1, 2, -1}, {3, 4, 1, 3, 2, 3, -2},
  };
  for (const auto& c : cases) {
    const QuadraticHGParams params(Rational(c.an, c.ad), Rational(c.bn, c.bd),
                                   Rational(c.cn, c.cd), Rational(c.d));
    for (long p : primes_up_to(50)) {
      if (!is_good_split_prime(params, p)) continue;
      QuadraticTermValuation engine(params, p);
      for (unsigned long k = 0; k <= 40; ++k)
        CHECK(engine.at(mpz_class(static_cast<long>(k))) ==
              exact_valuation_oracle(params, p, k));
    }
  }
}

TEST_CASE("counting oracle equals factoring oracle") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<Rational> alpha{random_unit_fraction(rng, 12), random_unit_fraction(rng, 12)};
    std::vector<Rational> beta{random_unit_fraction(rng, 12)};
    if (alpha[0] == beta[0] || alpha[1] == beta[0]) continue;
    const HypergeomParams params(alpha, beta);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
      for (unsigned long k : {0UL, 1UL, 7UL, 59UL, 128UL, 255UL}) {
        CHECK(detail::valuation_by_counting(params, p, mpz_class(static_cast<long>(k))) ==
              detail::valuation_by_factoring(params, p, k));
      }
    }
  }
  // p dividing a parameter denominator still factors exactly
  const HypergeomParams params({Rational(1, 5), Rational(1, 2)}, {Rational(1, 3)});
  for (long p : {2L, 3L, 5L}) {
    for (unsigned long k : {1UL, 10UL, 100UL}) {
      CHECK(detail::valuation_by_counting(params, p, mpz_class(static_cast<long>(k))) ==
            detail::valuation_by_factoring(params, p, k));
    }
  }
}

TEST_CASE("oracle handles indices beyond any expandable product") {
  // the two strategies agree across the dispatch boundary, and the large-k
  // path reproduces the carry formula where both apply
  const HypergeomParams params = example38();
  for (long p : {11L, 13L, 17L}) {
    const RationalTermValuation engine(params, p);
    for (const char* big : {"4096", "4097", "123456789", "340282366920938463463374607431"}) {
      const mpz_class k(big);
      CHECK(exact_valuation_oracle(params, p, k) == engine.at(k));
    }
  }
}

TEST_CASE("terminating series report infinite valuation past the cutoff") {
  const HypergeomParams params({Rational(-2), Rational(1, 2)}, {Rational(1, 3)});
  CHECK(coefficient(params, 2) != 0);
  CHECK(coefficient(params, 3) == 0);
  CHECK(coefficient(params, 7) == 0);
  const RationalTermValuation engine(params, 7);
  CHECK_FALSE(engine.at(2).infinite);
  CHECK(engine.at(3).infinite);
  CHECK(exact_valuation_oracle(params, 7, mpz_class(3)).infinite);
  CHECK(detail::valuation_by_counting(params, 7, mpz_class(100000000000L)).infinite);
}

TEST_CASE("exact oracle example") {
  const HypergeomParams gauss({Rational(1, 2), Rational(1, 2)}, {Rational(1)});
  CHECK(exact_valuation_oracle(gauss, 2, mpz_class(1)) == Valuation{false, -2});
  CHECK(exact_valuation_oracle(gauss, 2, mpz_class(0)) == Valuation{false, 0});
}

TEST_CASE("asymptotic shortcut") {
  CHECK(asymptotic_boundedness_shortcut(HypergeomParams({Rational(1, 2)}, {Rational(1, 3)})) ==
        SeriesClass::no_primes_bounded);
  CHECK(asymptotic_boundedness_shortcut(
            HypergeomParams({Rational(1, 2), Rational(1, 3)}, {Rational(1, 4)})) ==
        SeriesClass::regular_singular);
  CHECK(asymptotic_boundedness_shortcut(
            HypergeomParams({Rational(1, 2), Rational(1, 3), Rational(1, 5)},
                            {Rational(1, 4)})) == SeriesClass::all_primes_bounded);
}

TEST_CASE("good primes") {
  const HypergeomParams params = example38();
  CHECK(good_prime_bound(params).threshold == 10);
  CHECK(is_good_prime(params, 11));
  CHECK(is_good_prime(params, 13));
  CHECK_FALSE(is_good_prime(params, 5));  // divides the denominators
  CHECK_FALSE(is_good_prime(params, 2));  // 1/2 - 1 is not a 2-adic unit

  const QuadraticHGParams quad(Rational(1, 3), Rational(1), Rational(5, 6), Rational(-3));
  CHECK(good_prime_bound(quad).threshold == 6);
  CHECK_FALSE(is_good_prime(quad, 2));
  CHECK_FALSE(is_good_prime(quad, 3));
  CHECK(is_good_prime(quad, 7));
  CHECK(is_split(quad, 7));
  CHECK_FALSE(is_split(quad, 5));
  CHECK(is_good_split_prime(quad, 13));

  // p-integrality failure points to the oracle
  CHECK_THROWS_AS(RationalTermValuation(params, 5), std::domain_error);
  CHECK_THROWS_AS(QuadraticTermValuation(quad, 5), std::domain_error);
}

TEST_CASE("min valuation scans") {
  const HypergeomParams params = example38();
  const RationalTermValuation engine(params, 11);
  const ScanResult scan = min_valuation_scan(engine, 400);
  CHECK(scan.min_value == 0);
  const RationalTermValuation e13(params, 13);
  const ScanResult bad = min_valuation_scan(e13, 400);
  CHECK(bad.min_value < 0);
  CHECK(e13.at(mpz_class(static_cast<long>(bad.argmin))).value == bad.min_value);
}
