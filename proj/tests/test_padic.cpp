#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyp/padic.hpp"

#include <numeric>
#include <random>

using namespace hyp;

namespace {

Rational random_p_integral(std::mt19937_64& rng, long p) {
  std::uniform_int_distribution<long> num(-400, 400);
  std::uniform_int_distribution<long> den(1, 60);
  while (true) {
    long d = den(rng);
    if (d % p == 0) continue;
    Rational x(num(rng), d);
    x.canonicalize();
    return x;
  }
}

}  // namespace

TEST_CASE("rational_expansion examples") {
  const RationalExpansion e = rational_expansion(Rational(-4, 5), 3);
  CHECK(e.preperiod.empty());
  CHECK(e.period == std::vector<int>{1, 0, 1, 2});
  CHECK(e.compact_string() == "|1,0,1,2");
  CHECK(e.value() == Rational(-4, 5));

  const RationalExpansion minus_one = rational_expansion(Rational(-1), 5);
  CHECK(minus_one.preperiod.empty());
  CHECK(minus_one.period == std::vector<int>{4});

  // digit at j = M-1 agrees with floor({-p^{M-1-j} a} p) at j = 3
  CHECK(e.digit(3) == 2);

  CHECK_THROWS_AS(rational_expansion(Rational(1, 3), 3), std::domain_error);
}

TEST_CASE("digit_at wraps into the period") {
  const RationalExpansion e = rational_expansion(Rational(-4, 5), 3);
  CHECK(digit_at(e, 0) == 1);
  CHECK(digit_at(e, 7) == 2);
  const RationalExpansion minus_one = rational_expansion(Rational(-1), 5);
  CHECK(digit_at(minus_one, 1000000) == 4);
}

TEST_CASE("expansions reconstruct their source exactly") {
  std::mt19937_64 rng(101);
  const long primes[] = {2, 3, 5, 7, 11, 13};
  for (int i = 0; i < 200; ++i) {
    const long p = primes[static_cast<std::size_t>(i) % 6];
    const Rational x = random_p_integral(rng, p);
    const RationalExpansion e = rational_expansion(x, p);
    CHECK(e.value() == x);
    CHECK(!e.period.empty());
  }
}

TEST_CASE("period length divides the order of p mod the denominator") {
  std::mt19937_64 rng(102);
  for (long p : {3L, 5L, 7L, 11L}) {
    for (int i = 0; i < 50; ++i) {
      const Rational x = random_p_integral(rng, p);
      if (is_integer(x)) continue;
      const RationalExpansion e = rational_expansion(x, p);
      const long ord = multiplicative_order(p, static_cast<long>(x.get_den().get_si()));
      CHECK(ord % static_cast<long>(e.period.size()) == 0);
    }
  }
}

TEST_CASE("purely periodic exactly on (-1,0) for p-adic units") {
  std::mt19937_64 rng(103);
  for (long p : {3L, 5L, 7L, 13L}) {
    int checked = 0;
    while (checked < 50) {
      const Rational x = random_p_integral(rng, p);
      if (x == 0 || mpz_divisible_ui_p(x.get_num_mpz_t(), static_cast<unsigned long>(p)))
        continue;  // keep units only
      ++checked;
      const RationalExpansion e = rational_expansion(x, p);
      CHECK(e.preperiod.empty() == (x > -1 && x < 0));
    }
  }
}

TEST_CASE("digit formula floor({-p^{M-1-j} a} p)") {
  for (long v = 2; v <= 12; ++v) {
    for (long u = 1; u < v; ++u) {
      if (std::gcd(u, v) != 1) continue;
      const Rational a(u, v);
      for (long p : primes_up_to(50)) {
        if (v % p == 0) continue;
        const long M = multiplicative_order(p, v);
        const RationalExpansion e = rational_expansion(a - 1, p);
        for (long j = 0; j < M; ++j) {
          const Rational frac =
              fractional_part(Rational(-mod_pow(p, M - 1 - j, v)) * a);
          const mpz_class expected = floor_rational(frac * p);
          CHECK(e.digit(static_cast<std::uint64_t>(j)) == expected);
        }
      }
    }
  }
}

TEST_CASE("nonzero_digit_guarantee") {
  CHECK(nonzero_digit_guarantee(Rational(1, 5), 7));
  CHECK_FALSE(nonzero_digit_guarantee(Rational(1, 5), 3));
  CHECK(nonzero_digit_guarantee(Rational(1, 2), 11));
  const RationalExpansion e = rational_expansion(Rational(1, 2) - 1, 11);
  CHECK(e.preperiod.empty());
  CHECK(e.period == std::vector<int>{5});
  // when the guarantee holds, every digit is positive
  for (long v = 2; v <= 9; ++v)
    for (long u = 1; u < v; ++u) {
      if (std::gcd(u, v) != 1) continue;
      for (long p : {11L, 13L, 17L}) {
        if (!nonzero_digit_guarantee(Rational(u, v), p)) continue;
        const RationalExpansion d = rational_expansion(Rational(u, v) - 1, p);
        for (std::uint64_t j = 0; j < d.period.size() + d.preperiod.size(); ++j)
          CHECK(d.digit(j) >= 1);
      }
    }
}

TEST_CASE("hensel_sqrt") {
  CHECK(hensel_sqrt(mpz_class(2), 7, 2) == 10);
  CHECK(hensel_sqrt(mpz_class(4), 5, 3) == 2);
  CHECK(hensel_sqrt(mpz_class(-3), 7, 1) == 2);
  CHECK_THROWS_AS(hensel_sqrt(mpz_class(3), 5, 2), std::domain_error);   // non-residue
  CHECK_THROWS_AS(hensel_sqrt(mpz_class(2), 2, 2), std::domain_error);   // p = 2
  CHECK_THROWS_AS(hensel_sqrt(mpz_class(14), 7, 2), std::domain_error);  // p | D

  // lifted roots square to D and successive precisions agree
  for (long p : {3L, 5L, 7L, 11L, 13L, 101L}) {
    for (long D = -20; D <= 20; ++D) {
      if (D == 0 || D % p == 0) continue;
      mpz_class rem = mpz_class(D) % p;
      if (rem < 0) rem += p;
      if (mpz_legendre(rem.get_mpz_t(), mpz_class(p).get_mpz_t()) != 1) continue;
      const unsigned k = 6;
      const mpz_class r = hensel_sqrt(mpz_class(D), p, k);
      mpz_class pk;
      mpz_pow_ui(pk.get_mpz_t(), mpz_class(p).get_mpz_t(), k);
      CHECK((r * r - D) % pk == 0);
      CHECK(r > 0);
      CHECK(r < pk);
      const mpz_class r_deeper = hensel_sqrt(mpz_class(D), p, k + 5);
      CHECK(r_deeper % pk == r);
      // canonical choice sits in (0, p/2)
      CHECK(2 * (r % p) < p);
    }
  }
}

TEST_CASE("quadratic digit stream basics") {
  QuadraticDigitStream plus(Rational(1, 2), Rational(1), Rational(2), 7, Embedding::plus);
  CHECK(plus.digit(0) == 6);  // 1/2 + sqrt(2) - 1 = 4 + 3 - 1 mod 7

  // b = 0 degenerates to the rational expansion of a - 1
  QuadraticDigitStream degenerate(Rational(1, 2), Rational(0), Rational(2), 7,
                                  Embedding::plus);
  const RationalExpansion ref = rational_expansion(Rational(-1, 2), 7);
  CHECK(degenerate.digit(0) == 3);
  for (std::uint64_t j = 0; j < 40; ++j) CHECK(degenerate.digit(j) == ref.digit(j));

  CHECK_THROWS_AS(QuadraticDigitStream(Rational(1, 2), Rational(1), Rational(2), 5,
                                       Embedding::plus),
                  std::domain_error);  // 2 is not a residue mod 5
  CHECK_THROWS_AS(QuadraticDigitStream(Rational(1, 2), Rational(1), Rational(2), 2,
                                       Embedding::plus),
                  std::domain_error);  // p = 2 excluded
}

TEST_CASE("conjugate streams are digitwise complements when 2a is an integer") {
  for (long p : {7L, 17L, 23L}) {
    QuadraticDigitStream plus(Rational(1, 2), Rational(1), Rational(2), p,
                              Embedding::plus);
    QuadraticDigitStream minus(Rational(1, 2), Rational(1), Rational(2), p,
                               Embedding::minus);
    for (std::uint64_t j = 0; j < 60; ++j)
      CHECK(plus.digit(j) + minus.digit(j) == p - 1);
  }
}

TEST_CASE("digit sums obey the carry inequality") {
  // x[j] + y[j] >= (x+y)[j] - 1, rational pairs and conjugate quadratic pairs
  std::mt19937_64 rng(104);
  int rational_pairs = 0;
  while (rational_pairs < 50) {
    const long p = std::vector<long>{3, 5, 7, 11}[rng() % 4];
    const Rational x = random_p_integral(rng, p);
    const Rational y = random_p_integral(rng, p);
    ++rational_pairs;
    const RationalExpansion ex = rational_expansion(x, p);
    const RationalExpansion ey = rational_expansion(y, p);
    const RationalExpansion es = rational_expansion(x + y, p);
    for (std::uint64_t j = 0; j < 50; ++j)
      CHECK(ex.digit(j) + ey.digit(j) >= es.digit(j) - 1);
  }

  const struct {
    long p;
    long a_num, a_den, b_num, b_den, d;
  } quads[] = {
      {7, 1, 3, 1, 1, 2},  {7, 2, 3, 1, 2, 2},  {17, 1, 5, 2, 3, 2},
      {23, 1, 3, 1, 1, 2}, {11, 1, 3, 1, 1, 5}, {11, 4, 7, 3, 5, 5},
  };
  for (const auto& q : quads) {
    const Rational a(q.a_num, q.a_den), b(q.b_num, q.b_den), D(q.d);
    QuadraticDigitStream x(a, b, D, q.p, Embedding::plus);
    QuadraticDigitStream y(a, b, D, q.p, Embedding::minus);
    const RationalExpansion sum = rational_expansion(2 * a - 2, q.p);
    for (std::uint64_t j = 0; j < 80; ++j)
      CHECK(x.digit(j) + y.digit(j) >= sum.digit(j) - 1);
  }
}

TEST_CASE("stream digits are stable under precision growth") {
  QuadraticDigitStream eager(Rational(1, 3), Rational(1), Rational(-3), 7,
                             Embedding::plus);
  QuadraticDigitStream lazy(Rational(1, 3), Rational(1), Rational(-3), 7,
                            Embedding::plus);
  std::vector<int> first;
  for (std::uint64_t j = 0; j < 30; ++j) first.push_back(eager.digit(j));
  (void)eager.digit(200);  // force several growth steps
  for (std::uint64_t j = 0; j < 30; ++j) CHECK(eager.digit(j) == first[j]);
  (void)lazy.digit(200);  // grow before reading low digits
  for (std::uint64_t j = 0; j < 30; ++j) CHECK(lazy.digit(j) == first[j]);
}

TEST_CASE("square D folds into the rational part") {
  QuadraticDigitStream stream(Rational(1, 3), Rational(1, 2), Rational(9, 4), 7,
                              Embedding::plus);
  // 1/3 + (1/2)(3/2) - 1 = 1/12
  const RationalExpansion ref = rational_expansion(Rational(1, 12), 7);
  for (std::uint64_t j = 0; j < 30; ++j) CHECK(stream.digit(j) == ref.digit(j));
}

TEST_CASE("digit window statistics") {
  // full open window: everything except digits 0 and p-1
  QuadraticDigitStream s1(Rational(1), Rational(1), Rational(2), 7, Embedding::plus);
  const WindowStats full = digit_window_statistics(s1, 1, 0, Rational(0), Rational(1), 3000);
  std::uint64_t extremes = 0;
  QuadraticDigitStream s2(Rational(1), Rational(1), Rational(2), 7, Embedding::plus);
  for (std::uint64_t j = 0; j < 3000; ++j) {
    const int d = s2.digit(j);
    if (d == 0 || d == 6) ++extremes;
  }
  CHECK(full.hit_positions.size() == 3000 - extremes);

  // sqrt(2) at p = 7 with window (0, 3): digits 1 and 2, frequency near 2/7
  QuadraticDigitStream s3(Rational(1), Rational(1), Rational(2), 7, Embedding::plus);
  const WindowStats half =
      digit_window_statistics(s3, 1, 0, Rational(0), Rational(1, 2), 10000);
  CHECK(half.hit_ratio > 2.0 / 7.0 - 0.05);
  CHECK(half.hit_ratio < 2.0 / 7.0 + 0.05);

  // stepping a b = 0 stream by its period pins every sampled digit
  QuadraticDigitStream periodic(Rational(-4, 5) + 1, Rational(0), Rational(2), 3,
                                Embedding::plus);
  const RationalExpansion ref = rational_expansion(Rational(-4, 5), 3);
  const std::uint64_t period = ref.period.size();
  for (std::uint64_t s = 0; s < period; ++s) {
    QuadraticDigitStream walker(Rational(-4, 5) + 1, Rational(0), Rational(2), 3,
                                Embedding::plus);
    const WindowStats stats = digit_window_statistics(walker, period, s, Rational(0),
                                                      Rational(1), 1000);
    CHECK((stats.hit_ratio == 0.0 || stats.hit_ratio == 1.0));
  }

  QuadraticDigitStream s4(Rational(1), Rational(1), Rational(2), 7, Embedding::plus);
  CHECK_THROWS_AS(digit_window_statistics(s4, 0, 0, Rational(0), Rational(1), 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(digit_window_statistics(s4, 1, 0, Rational(1, 2), Rational(1, 3), 10),
                  std::invalid_argument);
}
