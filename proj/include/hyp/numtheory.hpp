#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hyp {

// Exact fraction, always reduced, denominator > 0. mpq_class preserves both
// invariants through arithmetic; parse_rational canonicalizes raw input.
using Rational = mpq_class;

inline mpz_class numerator(const Rational& x) { return x.get_num(); }
inline mpz_class denominator(const Rational& x) { return x.get_den(); }

bool is_integer(const Rational& x);
bool is_nonpositive_integer(const Rational& x);

// Accepts "n/d" or "n" with an optional leading '-'; rejects anything else.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& x);

mpz_class floor_rational(const Rational& x);

// {x} = x - floor(x), in [0,1). Integers map to 0.
Rational fractional_part(const Rational& x);

// A residue class u (mod M), kept in [0, M).
struct CongruenceClass {
  long residue = 0;
  long modulus = 1;
};

// Validates 0 <= residue < modulus and gcd(residue, modulus) = 1.
CongruenceClass make_unit_class(long residue, long modulus);

long mod_pow(long base, long exp, long m);
long mod_inverse(long a, long m);

// Smallest A >= 1 with u^A = 1 (mod M); throws if gcd(u, M) > 1.
long multiplicative_order(long u, long M);

long euler_phi(long M);

// All residues in [1, M) coprime to M, ascending. unit_residues(1) = {0}.
std::vector<long> unit_residues(long M);

// Kronecker symbol (delta / u). For a fundamental discriminant delta this is
// the splitting character of the quadratic field of that discriminant,
// periodic in u mod |delta|.
int kronecker_symbol(const mpz_class& delta, const mpz_class& u);

// Units u mod M whose entire power orbit u^0, u^1, ... satisfies `good`.
// The result is a union of cyclic subgroups, ascending. Nonempty only when
// good(1) holds.
std::vector<long> power_closed_units(long M, const std::function<bool(long)>& good);

// nu_p(k!) = sum_{i>=1} floor(k / p^i), k >= 0.
long legendre_factorial_valuation(long p, const mpz_class& k);

bool is_prime(long n);
std::vector<long> primes_up_to(long bound);

// nu_p of a nonzero integer / rational.
long valuation(const mpz_class& n, long p);
long valuation(const Rational& x, long p);

// Squarefree d with n = s^2 * d, sign carried by d. kernel(0) = 0.
mpz_class squarefree_kernel(const mpz_class& n);
// The matching s >= 1.
mpz_class square_part(const mpz_class& n);

// d if d = 1 (mod 4), else 4d, for squarefree d not in {0, 1}.
mpz_class fundamental_discriminant(const mpz_class& squarefree_d);

bool is_rational_square(const Rational& x);

}  // namespace hyp
