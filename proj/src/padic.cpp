#include "hyp/padic.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hyp {

namespace {

void require_prime(long p) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

std::string join_digits(const std::vector<int>& digits) {
  std::ostringstream os;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) os << ',';
    os << digits[i];
  }
  return os.str();
}

}  // namespace

int RationalExpansion::digit(std::uint64_t j) const {
  if (j < preperiod.size()) return preperiod[static_cast<std::size_t>(j)];
  return period[static_cast<std::size_t>((j - preperiod.size()) % period.size())];
}

bool RationalExpansion::all_max_period() const {
  return std::all_of(period.begin(), period.end(),
                     [this](int d) { return d == p - 1; });
}

Rational RationalExpansion::value() const {
  mpz_class pz(p);
  mpz_class scale = 1;
  mpz_class head = 0;
  for (int d : preperiod) {
    head += d * scale;
    scale *= pz;
  }
  mpz_class tail = 0;
  mpz_class tscale = 1;
  for (int d : period) {
    tail += d * tscale;
    tscale *= pz;
  }
  // value = head + p^{|pre|} * tail / (1 - p^{|period|})
  Rational result(head);
  result += Rational(scale) * Rational(tail) / Rational(1 - tscale);
  result.canonicalize();
  return result;
}

std::string RationalExpansion::compact_string() const {
  return join_digits(preperiod) + "|" + join_digits(period);
}

RationalExpansion rational_expansion(const Rational& x, long p) {
  require_prime(p);
  mpz_class v = x.get_den();
  if (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p)))
    throw std::domain_error("not p-integral: " + to_string(x) + " at p = " + std::to_string(p));

  // Digit recurrence n -> (n - d v)/p on numerators over the fixed
  // denominator v; states are bounded, so a repeat must occur, and the first
  // repeat yields the minimal preperiod and period.
  mpz_class pz(p);
  mpz_class vinv;
  mpz_invert(vinv.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t());

  RationalExpansion out;
  out.p = p;
  std::vector<int> digits;
  std::map<mpz_class, std::size_t> first_seen;
  mpz_class n = x.get_num();
  while (true) {
    auto [it, inserted] = first_seen.emplace(n, digits.size());
    if (!inserted) {
      std::size_t start = it->second;
      out.preperiod.assign(digits.begin(), digits.begin() + static_cast<long>(start));
      out.period.assign(digits.begin() + static_cast<long>(start), digits.end());
      return out;
    }
    mpz_class d = (n * vinv) % pz;
    if (d < 0) d += pz;
    digits.push_back(static_cast<int>(d.get_si()));
    n = (n - d * v) / pz;
  }
}

bool nonzero_digit_guarantee(const Rational& a, long p) {
  require_prime(p);
  if (!(a > 0 && a < 1)) throw std::invalid_argument("expected 0 < a < 1");
  mpz_class v = a.get_den();
  if (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(p)))
    throw std::domain_error("not p-integral");
  return v < p;
}

namespace {

// Tonelli-Shanks square root of a mod p, for odd prime p and (a/p) = +1.
mpz_class sqrt_mod_prime(const mpz_class& a, long p) {
  mpz_class pz(p);
  if (p % 4 == 3) {
    mpz_class r;
    mpz_class e = (pz + 1) / 4;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), pz.get_mpz_t());
    return r;
  }
  mpz_class q = pz - 1;
  unsigned long s = mpz_remove(q.get_mpz_t(), q.get_mpz_t(), mpz_class(2).get_mpz_t());
  mpz_class z = 2;
  while (mpz_legendre(z.get_mpz_t(), pz.get_mpz_t()) != -1) ++z;
  mpz_class m(static_cast<long>(s)), c, t, r;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
  mpz_class e = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), pz.get_mpz_t());
  while (t != 1) {
    mpz_class tt = t;
    long i = 0;
    while (tt != 1) {
      mpz_powm_ui(tt.get_mpz_t(), tt.get_mpz_t(), 2, pz.get_mpz_t());
      ++i;
    }
    mpz_class b = c;
    for (long j = 0; j < m.get_si() - i - 1; ++j)
      mpz_powm_ui(b.get_mpz_t(), b.get_mpz_t(), 2, pz.get_mpz_t());
    m = i;
    c = (b * b) % pz;
    t = (t * c) % pz;
    r = (r * b) % pz;
  }
  return r;
}

}  // namespace

mpz_class hensel_sqrt(const mpz_class& D, long p, unsigned k) {
  if (p == 2 || !is_prime(p)) throw std::domain_error("bad prime");
  if (k == 0) throw std::invalid_argument("precision must be >= 1");
  mpz_class pz(p);
  mpz_class a = D % pz;
  if (a < 0) a += pz;
  if (a == 0) throw std::domain_error("bad prime");
  if (mpz_legendre(a.get_mpz_t(), pz.get_mpz_t()) != 1)
    throw std::domain_error("p does not split");

  mpz_class r = sqrt_mod_prime(a, p);
  if (2 * r > pz) r = pz - r;  // canonical root, residue in (0, p/2)

  unsigned prec = 1;
  mpz_class mod = pz;
  while (prec < k) {
    prec *= 2;
    mod *= mod;
    // Newton step r -> r - (r^2 - D) / (2r), exact mod p^prec
    mpz_class t = (r * r - D) % mod;
    mpz_class inv2r;
    mpz_invert(inv2r.get_mpz_t(), mpz_class(2 * r).get_mpz_t(), mod.get_mpz_t());
    r = (r - t * inv2r) % mod;
    if (r < 0) r += mod;
  }
  mpz_class pk;
  mpz_pow_ui(pk.get_mpz_t(), pz.get_mpz_t(), k);
  r %= pk;
  if (r < 0) r += pk;
  return r;
}

QuadraticDigitStream::QuadraticDigitStream(const Rational& a, const Rational& b,
                                           const Rational& D, long p, Embedding emb)
    : p_(p), sign_(emb == Embedding::plus ? 1 : -1) {
  require_prime(p);
  if (p == 2) throw std::domain_error("bad prime: p = 2 excluded for quadratic digits");
  base_ = a - 1;
  if (b == 0) {
    kernel_ = 0;
    root_scale_ = 0;
  } else {
    if (D == 0) throw std::invalid_argument("D must be nonzero");
    // sqrt(D) = (s / denom(D)) * sqrt(kernel), kernel squarefree
    mpz_class inner = D.get_num() * D.get_den();
    kernel_ = squarefree_kernel(inner);
    root_scale_ = b * Rational(square_part(inner)) / Rational(D.get_den());
    if (kernel_ == 1) {
      // perfect-square D degenerates to the rational value a + b*sqrt(D) - 1
      base_ += root_scale_ * sign_;
      kernel_ = 0;
      root_scale_ = 0;
      sign_ = 1;
    }
  }
  const auto check_coprime = [p](const mpz_class& m, const char* what) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p)))
      throw std::domain_error(std::string("bad prime: p divides ") + what);
  };
  check_coprime(base_.get_den(), "a parameter denominator");
  if (kernel_ != 0) {
    check_coprime(root_scale_.get_den(), "b/D parameter denominator");
    check_coprime(kernel_, "the field discriminant");
    if (mpz_legendre(mpz_class(((kernel_ % p) + p) % p).get_mpz_t(),
                     mpz_class(p).get_mpz_t()) != 1)
      throw std::domain_error("p does not split in the parameter field");
  }
  grow(16);
}

void QuadraticDigitStream::grow(std::uint64_t digits_needed) {
  std::uint64_t target = std::max<std::uint64_t>(16, digits_.size() * 2);
  target = std::max(target, digits_needed);
  mpz_class pk;
  mpz_pow_ui(pk.get_mpz_t(), mpz_class(p_).get_mpz_t(), static_cast<unsigned long>(target));

  mpz_class den_inv;
  mpz_invert(den_inv.get_mpz_t(), base_.get_den_mpz_t(), pk.get_mpz_t());
  mpz_class residue = (base_.get_num() * den_inv) % pk;
  if (kernel_ != 0) {
    mpz_class root = hensel_sqrt(kernel_, p_, static_cast<unsigned>(target));
    mpz_class scale_inv;
    mpz_invert(scale_inv.get_mpz_t(), root_scale_.get_den_mpz_t(), pk.get_mpz_t());
    mpz_class term = (root_scale_.get_num() * scale_inv) % pk;
    term = (term * root) % pk;
    if (sign_ < 0) term = -term;
    residue = (residue + term) % pk;
  }
  residue %= pk;
  if (residue < 0) residue += pk;

  std::vector<int> digits(static_cast<std::size_t>(target));
  mpz_class q = residue;
  for (std::uint64_t i = 0; i < target; ++i) {
    digits[static_cast<std::size_t>(i)] = static_cast<int>(
        mpz_fdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p_)));
  }
  assert(std::equal(digits_.begin(), digits_.end(), digits.begin()));
  digits_ = std::move(digits);
}

int QuadraticDigitStream::digit(std::uint64_t n) {
  if (n >= digits_.size()) grow(n + 1);
  return digits_[static_cast<std::size_t>(n)];
}

QuadraticDigitStream quadratic_digit_stream(const Rational& a, const Rational& b,
                                            const Rational& D, long p,
                                            Embedding emb) {
  return QuadraticDigitStream(a, b, D, p, emb);
}

WindowStats digit_window_statistics(QuadraticDigitStream& stream, std::uint64_t r,
                                    std::uint64_t s, const Rational& u,
                                    const Rational& v, std::uint64_t count) {
  if (r < 1) throw std::invalid_argument("stride must be >= 1");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (!(u >= 0 && u < v && v <= 1))
    throw std::invalid_argument("window must satisfy 0 <= u < v <= 1");
  const Rational span(stream.prime() - 1);
  const Rational lo = u * span;
  const Rational hi = v * span;
  WindowStats stats;
  stats.samples = count;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t idx = s + i * r;
    Rational d(stream.digit(idx));
    if (d > lo && d < hi) stats.hit_positions.push_back(idx);
  }
  stats.hit_ratio = static_cast<double>(stats.hit_positions.size()) /
                    static_cast<double>(count);
  return stats;
}

}  // namespace hyp
