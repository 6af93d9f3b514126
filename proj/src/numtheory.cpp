#include "hyp/numtheory.hpp"

#include <numeric>
#include <stdexcept>

namespace hyp {

bool is_integer(const Rational& x) { return x.get_den() == 1; }

bool is_nonpositive_integer(const Rational& x) {
  return is_integer(x) && x.get_num() <= 0;
}

Rational parse_rational(std::string_view text) {
  const auto fail = [&] {
    throw std::invalid_argument("invalid rational '" + std::string(text) +
                                "': expected n or n/d");
  };
  std::string_view rest = text;
  if (!rest.empty() && rest.front() == '-') rest.remove_prefix(1);
  if (rest.empty()) fail();
  bool seen_slash = false;
  std::size_t digits_after_slash = 0;
  for (char ch : rest) {
    if (ch == '/') {
      if (seen_slash) fail();
      seen_slash = true;
    } else if (ch >= '0' && ch <= '9') {
      if (seen_slash) ++digits_after_slash;
    } else {
      fail();
    }
  }
  if (rest.front() == '/' || (seen_slash && digits_after_slash == 0)) fail();
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0) fail();
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& x) { return x.get_str(); }

mpz_class floor_rational(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Rational fractional_part(const Rational& x) {
  return x - Rational(floor_rational(x));
}

CongruenceClass make_unit_class(long residue, long modulus) {
  if (modulus < 1) throw std::invalid_argument("modulus must be positive");
  long r = residue % modulus;
  if (r < 0) r += modulus;
  if (std::gcd(r, modulus) != 1)
    throw std::invalid_argument("residue " + std::to_string(residue) +
                                " is not a unit mod " + std::to_string(modulus));
  return CongruenceClass{r, modulus};
}

long mod_pow(long base, long exp, long m) {
  if (m < 1) throw std::invalid_argument("modulus must be positive");
  mpz_class r;
  mpz_powm_ui(r.get_mpz_t(), mpz_class(base).get_mpz_t(),
              static_cast<unsigned long>(exp), mpz_class(m).get_mpz_t());
  return static_cast<long>(r.get_si());
}

long mod_inverse(long a, long m) {
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), mpz_class(a).get_mpz_t(), mpz_class(m).get_mpz_t()) == 0)
    throw std::invalid_argument(std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return static_cast<long>(inv.get_si());
}

long multiplicative_order(long u, long M) {
  if (M < 1) throw std::invalid_argument("modulus must be positive");
  if (M == 1) return 1;
  long r = u % M;
  if (r < 0) r += M;
  if (std::gcd(r, M) != 1)
    throw std::invalid_argument("order undefined: gcd(" + std::to_string(u) +
                                ", " + std::to_string(M) + ") > 1");
  long cur = r;
  for (long a = 1; a <= M; ++a) {
    if (cur == 1 % M) return a;
    cur = static_cast<long>((static_cast<__int128>(cur) * r) % M);
  }
  throw std::logic_error("multiplicative order not found");
}

long euler_phi(long M) {
  if (M < 1) throw std::invalid_argument("phi undefined for M < 1");
  long result = M;
  long n = M;
  for (long f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      result -= result / f;
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<long> unit_residues(long M) {
  if (M < 1) throw std::invalid_argument("modulus must be positive");
  if (M == 1) return {0};
  std::vector<long> units;
  for (long u = 1; u < M; ++u)
    if (std::gcd(u, M) == 1) units.push_back(u);
  return units;
}

int kronecker_symbol(const mpz_class& delta, const mpz_class& u) {
  return mpz_kronecker(delta.get_mpz_t(), u.get_mpz_t());
}

std::vector<long> power_closed_units(long M, const std::function<bool(long)>& good) {
  if (M < 1) throw std::invalid_argument("modulus must be positive");
  if (M == 1) return good(0) ? std::vector<long>{0} : std::vector<long>{};
  const auto mulmod = [M](long a, long b) {
    return static_cast<long>((static_cast<__int128>(a) * b) % M);
  };
  std::vector<char> in_g(static_cast<std::size_t>(M), 0);
  const std::vector<long> units = unit_residues(M);
  for (long u : units) in_g[static_cast<std::size_t>(u)] = good(u) ? 1 : 0;

  std::vector<char> known(static_cast<std::size_t>(M), 0);
  std::vector<long> result;
  for (long u : units) {
    if (known[static_cast<std::size_t>(u)]) {
      result.push_back(u);
      continue;
    }
    bool ok = true;
    long w = u;
    while (true) {
      if (!in_g[static_cast<std::size_t>(w)]) {
        ok = false;
        break;
      }
      if (w == 1) break;
      w = mulmod(w, u);
    }
    if (!ok) continue;
    result.push_back(u);
    // every element of <u> generates a subgroup of <u>, hence also qualifies
    w = u;
    do {
      known[static_cast<std::size_t>(w)] = 1;
      w = mulmod(w, u);
    } while (w != u);
  }
  return result;
}

long legendre_factorial_valuation(long p, const mpz_class& k) {
  if (p < 2 || !is_prime(p)) throw std::invalid_argument("p must be prime");
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  mpz_class total = 0;
  mpz_class q = k;
  while (q > 0) {
    mpz_fdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
    total += q;
  }
  if (!mpz_fits_slong_p(total.get_mpz_t()))
    throw std::overflow_error("factorial valuation exceeds long");
  return static_cast<long>(total.get_si());
}

bool is_prime(long n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(mpz_class(n).get_mpz_t(), 32) != 0;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> primes;
  if (bound < 2) return primes;
  std::vector<char> sieve(static_cast<std::size_t>(bound) + 1, 1);
  for (long i = 2; i <= bound; ++i) {
    if (!sieve[static_cast<std::size_t>(i)]) continue;
    primes.push_back(i);
    for (long j = i * i; j <= bound; j += i) sieve[static_cast<std::size_t>(j)] = 0;
  }
  return primes;
}

long valuation(const mpz_class& n, long p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  mpz_class reduced;
  return static_cast<long>(
      mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

long valuation(const Rational& x, long p) {
  if (x == 0) throw std::invalid_argument("valuation of zero");
  return valuation(mpz_class(x.get_num()), p) - valuation(mpz_class(x.get_den()), p);
}

mpz_class squarefree_kernel(const mpz_class& n) {
  if (n == 0) return 0;
  mpz_class m = abs(n);
  mpz_class kernel = 1;
  for (mpz_class f = 2; f * f <= m; ++f) {
    if (m % f != 0) continue;
    int e = 0;
    while (m % f == 0) {
      m /= f;
      ++e;
    }
    if (e % 2 == 1) kernel *= f;
  }
  kernel *= m;  // the remaining factor is prime, exponent 1
  return n < 0 ? -kernel : kernel;
}

mpz_class square_part(const mpz_class& n) {
  if (n == 0) return 1;
  mpz_class ratio = abs(n) / abs(squarefree_kernel(n));
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), ratio.get_mpz_t());
  return s;
}

mpz_class fundamental_discriminant(const mpz_class& squarefree_d) {
  if (squarefree_d == 0 || squarefree_d == 1)
    throw std::invalid_argument("no discriminant for d in {0, 1}");
  mpz_class rem = squarefree_d % 4;
  if (rem < 0) rem += 4;
  return rem == 1 ? squarefree_d : 4 * squarefree_d;
}

bool is_rational_square(const Rational& x) {
  if (x < 0) return false;
  return mpz_perfect_square_p(x.get_num_mpz_t()) != 0 &&
         mpz_perfect_square_p(x.get_den_mpz_t()) != 0;
}

}  // namespace hyp
