#include "hyp/hypergeom.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace hyp {

namespace {

// Shift into (0,1]: the fractional part, except that integers map to 1.
Rational normalize_unit_interval(const Rational& x) {
  Rational f = fractional_part(x);
  return f == 0 ? Rational(1) : f;
}

long narrow_to_long(const mpz_class& z, const char* what) {
  if (!mpz_fits_slong_p(z.get_mpz_t()))
    throw std::overflow_error(std::string(what) + " does not fit in a long");
  return static_cast<long>(z.get_si());
}

std::vector<int> base_p_digits(const mpz_class& k, long p) {
  std::vector<int> digits;
  mpz_class q = k;
  while (q > 0) {
    digits.push_back(static_cast<int>(
        mpz_fdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p))));
  }
  return digits;
}

}  // namespace

HypergeomParams::HypergeomParams(std::vector<Rational> alpha, std::vector<Rational> beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)) {
  for (const Rational& b : beta_)
    if (is_nonpositive_integer(b))
      throw std::invalid_argument("lower parameter " + to_string(b) +
                                  " is a nonpositive integer");
  // Cancel upper/lower pairs that are exactly equal; their rising factorials
  // divide out of every coefficient.
  for (auto it = beta_.begin(); it != beta_.end();) {
    auto match = std::find(alpha_.begin(), alpha_.end(), *it);
    if (match != alpha_.end()) {
      alpha_.erase(match);
      it = beta_.erase(it);
    } else {
      ++it;
    }
  }
  for (const Rational& a : alpha_)
    if (is_nonpositive_integer(a)) terminating_ = true;

  mpz_class lcm = 1;
  const auto fold = [&lcm](const std::vector<Rational>& xs) {
    for (const Rational& x : xs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  };
  fold(alpha_);
  fold(beta_);
  modulus_ = narrow_to_long(lcm, "parameter modulus");

  norm_alpha_.reserve(alpha_.size());
  for (const Rational& a : alpha_) norm_alpha_.push_back(normalize_unit_interval(a));
  norm_beta_.reserve(beta_.size());
  for (const Rational& b : beta_) norm_beta_.push_back(normalize_unit_interval(b));
}

QuadraticHGParams::QuadraticHGParams(Rational a, Rational b, Rational c, Rational D)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), D_(std::move(D)) {
  if (b_ == 0)
    throw std::invalid_argument(
        "b = 0: the parameters are rational; use the rational-parameter interface");
  if (is_nonpositive_integer(c_))
    throw std::invalid_argument("lower parameter " + to_string(c_) +
                                " is a nonpositive integer");
  if (D_ == 0 || is_rational_square(D_))
    throw std::invalid_argument(
        "D = " + to_string(D_) +
        " is a perfect square: the parameters are rational; use the "
        "rational-parameter interface");
  mpz_class inner = D_.get_num() * D_.get_den();
  kernel_ = squarefree_kernel(inner);
  discriminant_ = fundamental_discriminant(kernel_);
  root_scale_ = Rational(square_part(inner)) / Rational(D_.get_den());
  root_scale_.canonicalize();
  norm_a_ = normalize_unit_interval(a_);
  norm_c_ = normalize_unit_interval(c_);
  integral_trace_ = is_integer(2 * a_);
}

Rational QuadraticHGParams::trace_fraction() const {
  return integral_trace_ ? Rational(1) : fractional_part(2 * a_);
}

Rational rising_factorial(const Rational& x, unsigned long k) {
  Rational result = 1;
  Rational factor = x;
  for (unsigned long i = 0; i < k; ++i, factor += 1) result *= factor;
  return result;
}

Rational coefficient(const HypergeomParams& params, unsigned long k) {
  Rational num = 1;
  for (const Rational& a : params.alpha()) num *= rising_factorial(a, k);
  Rational den = 1;
  for (const Rational& b : params.beta()) den *= rising_factorial(b, k);
  mpz_class kfact;
  mpz_fac_ui(kfact.get_mpz_t(), k);
  den *= Rational(kfact);
  return num / den;
}

Rational coefficient(const QuadraticHGParams& params, unsigned long k) {
  // The conjugate rising factorials multiply to a rational product over the
  // minimal polynomial: (a+bs)_k (a-bs)_k = prod_{j<k} P(-j) with
  // P(x) = x^2 - 2ax + a^2 - b^2 D.
  const Rational two_a = 2 * params.a();
  const Rational norm = params.a() * params.a() - params.b() * params.b() * params.D();
  Rational num = 1;
  for (unsigned long j = 0; j < k; ++j) {
    Rational jq(static_cast<long>(j));
    num *= jq * jq + two_a * jq + norm;
  }
  mpz_class kfact;
  mpz_fac_ui(kfact.get_mpz_t(), k);
  return num / (rising_factorial(params.c(), k) * Rational(kfact));
}

CoefficientSequence::CoefficientSequence(const HypergeomParams& params)
    : kind_(Kind::rational), alpha_(params.alpha()), beta_(params.beta()) {}

CoefficientSequence::CoefficientSequence(const QuadraticHGParams& params)
    : kind_(Kind::quadratic),
      two_a_(2 * params.a()),
      norm_(params.a() * params.a() - params.b() * params.b() * params.D()),
      c_(params.c()) {}

void CoefficientSequence::advance() {
  const unsigned long k = index_ + 1;
  const Rational shift(static_cast<long>(k - 1));
  if (kind_ == Kind::rational) {
    for (const Rational& a : alpha_) value_ *= a + shift;
    for (const Rational& b : beta_) value_ /= b + shift;
  } else {
    value_ *= shift * shift + two_a_ * shift + norm_;
    value_ /= c_ + shift;
  }
  value_ /= Rational(static_cast<long>(k));
  index_ = k;
}

CarryCount carry_count(const RationalExpansion& x, const mpz_class& k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  const long p = x.p;
  const std::vector<int> kd = base_p_digits(k, p);
  const std::uint64_t len = kd.size();
  const bool integer_tail = x.all_max_period();
  CarryCount out;
  int carry = 0;
  std::uint64_t j = 0;
  while (j < len || carry) {
    if (carry && j >= len && j >= x.preperiod.size() && integer_tail) {
      // every remaining digit is p-1: the carry never stops
      out.infinite = true;
      out.digits_inspected = j;
      return out;
    }
    int sum = x.digit(j) + (j < len ? kd[static_cast<std::size_t>(j)] : 0) + carry;
    carry = sum >= p ? 1 : 0;
    out.count += static_cast<std::uint64_t>(carry);
    ++j;
  }
  out.digits_inspected = j;
  return out;
}

CarryCount carry_count(QuadraticDigitStream& x, const mpz_class& k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  const long p = x.prime();
  const std::vector<int> kd = base_p_digits(k, p);
  const std::uint64_t len = kd.size();
  CarryCount out;
  int carry = 0;
  std::uint64_t j = 0;
  while (j < len || carry) {
    if (j > len + 100000)
      throw std::logic_error("carry chain did not terminate; stream value has an integer tail");
    int sum = x.digit(j) + (j < len ? kd[static_cast<std::size_t>(j)] : 0) + carry;
    carry = sum >= p ? 1 : 0;
    out.count += static_cast<std::uint64_t>(carry);
    ++j;
  }
  out.digits_inspected = j;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) {
  if (v.infinite) return os << "inf";
  return os << v.value;
}

RationalTermValuation::RationalTermValuation(const HypergeomParams& params, long p)
    : p_(p),
      series_excess_(static_cast<long>(params.m()) - static_cast<long>(params.n()) - 1) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  try {
    for (const Rational& a : params.alpha())
      alpha_exp_.push_back(rational_expansion(a - 1, p));
    for (const Rational& b : params.beta())
      beta_exp_.push_back(rational_expansion(b - 1, p));
  } catch (const std::domain_error&) {
    throw std::domain_error("a parameter is not p-integral at p = " + std::to_string(p) +
                            "; use the exact valuation oracle");
  }
}

Valuation RationalTermValuation::at(const mpz_class& k) const {
  long total = 0;
  for (const RationalExpansion& x : alpha_exp_) {
    CarryCount c = carry_count(x, k);
    if (c.infinite) return Valuation{true, 0};  // a zero factor: A_k = 0
    total += static_cast<long>(c.count);
  }
  for (const RationalExpansion& x : beta_exp_) {
    CarryCount c = carry_count(x, k);
    if (c.infinite)
      throw std::logic_error("lower parameter produced an infinite carry chain");
    total -= static_cast<long>(c.count);
  }
  if (series_excess_ != 0)
    total += series_excess_ * legendre_factorial_valuation(p_, k);
  return Valuation{false, total};
}

QuadraticTermValuation::QuadraticTermValuation(const QuadraticHGParams& params, long p)
    : p_(p),
      c_exp_(rational_expansion(params.c() - 1, p)),
      plus_(params.a(), params.b(), params.D(), p, Embedding::plus),
      minus_(params.a(), params.b(), params.D(), p, Embedding::minus) {
  if (!is_split(params, p))
    throw std::domain_error("p = " + std::to_string(p) +
                            " does not split; use the exact valuation oracle");
}

Valuation QuadraticTermValuation::at(const mpz_class& k) {
  CarryCount cp = carry_count(plus_, k);
  CarryCount cm = carry_count(minus_, k);
  CarryCount cc = carry_count(c_exp_, k);
  if (cc.infinite) throw std::logic_error("lower parameter produced an infinite carry chain");
  return Valuation{false, static_cast<long>(cp.count) + static_cast<long>(cm.count) -
                              static_cast<long>(cc.count)};
}

Valuation coefficient_valuation(const HypergeomParams& params, long p, const mpz_class& k) {
  return RationalTermValuation(params, p).at(k);
}

Valuation coefficient_valuation(QuadraticTermValuation& engine, const mpz_class& k) {
  return engine.at(k);
}

Valuation coefficient_valuation(const QuadraticHGParams& params, long p, const mpz_class& k) {
  QuadraticTermValuation engine(params, p);
  return engine.at(k);
}

ScanResult min_valuation_scan(const RationalTermValuation& engine, unsigned long k_max) {
  ScanResult result{0, 0};  // A_0 = 1
  for (unsigned long k = 1; k <= k_max; ++k) {
    const Valuation v = engine.at(mpz_class(static_cast<long>(k)));
    if (!v.infinite && v.value < result.min_value) {
      result.min_value = v.value;
      result.argmin = k;
    }
  }
  return result;
}

ScanResult min_valuation_scan(QuadraticTermValuation& engine, unsigned long k_max) {
  ScanResult result{0, 0};
  for (unsigned long k = 1; k <= k_max; ++k) {
    const Valuation v = engine.at(mpz_class(static_cast<long>(k)));
    if (!v.infinite && v.value < result.min_value) {
      result.min_value = v.value;
      result.argmin = k;
    }
  }
  return result;
}

namespace detail {

Valuation valuation_by_factoring(const HypergeomParams& params, long p, unsigned long k) {
  Rational a = coefficient(params, k);
  if (a == 0) return Valuation{true, 0};
  return Valuation{false, valuation(a, p)};
}

Valuation valuation_by_factoring(const QuadraticHGParams& params, long p, unsigned long k) {
  Rational a = coefficient(params, k);
  if (a == 0) return Valuation{true, 0};
  return Valuation{false, valuation(a, p)};
}

namespace {

mpz_class factorial_valuation_z(long p, const mpz_class& k) {
  mpz_class total = 0;
  mpz_class q = k;
  while (q > 0) {
    mpz_fdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
    total += q;
  }
  return total;
}

// nu_p((x)_k) for x = u/v reduced, as an exact count of the multiples of
// each p^e among u, u+v, ..., u+(k-1)v. Sets `zero` when a factor vanishes.
mpz_class rising_valuation_by_counting(const Rational& x, long p, const mpz_class& k,
                                       bool& zero) {
  if (k == 0) return 0;
  const mpz_class u = x.get_num();
  const mpz_class v = x.get_den();
  if (v == 1 && u <= 0 && -u <= k - 1) {
    zero = true;
    return 0;
  }
  const long vval = valuation(v, p);
  mpz_class total = -vval * k;
  if (vval > 0) return total;  // p | v: every factor u + jv is a p-unit times v^{-1}

  const mpz_class bound = abs(u) + (k - 1) * v;
  mpz_class pe(p);
  while (pe <= bound) {
    mpz_class vinv;
    mpz_invert(vinv.get_mpz_t(), v.get_mpz_t(), pe.get_mpz_t());
    mpz_class t = (-u * vinv) % pe;
    if (t < 0) t += pe;
    if (t <= k - 1) total += (k - 1 - t) / pe + 1;
    pe *= p;
  }
  return total;
}

}  // namespace

Valuation valuation_by_counting(const HypergeomParams& params, long p, const mpz_class& k) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  bool zero = false;
  mpz_class total = 0;
  for (const Rational& a : params.alpha()) {
    total += rising_valuation_by_counting(a, p, k, zero);
    if (zero) return Valuation{true, 0};
  }
  for (const Rational& b : params.beta()) {
    bool beta_zero = false;
    total -= rising_valuation_by_counting(b, p, k, beta_zero);
  }
  total -= factorial_valuation_z(p, k);
  return Valuation{false, narrow_to_long(total, "coefficient valuation")};
}

}  // namespace detail

Valuation exact_valuation_oracle(const HypergeomParams& params, long p, const mpz_class& k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  // Expanding the coefficient is the straightforward route; for indices far
  // beyond any expandable product (witness indices reach p^60 and more) the
  // factor-counting evaluation computes the same valuation exactly.
  if (mpz_fits_ulong_p(k.get_mpz_t()) && k <= 4096)
    return detail::valuation_by_factoring(params, p, k.get_ui());
  return detail::valuation_by_counting(params, p, k);
}

Valuation exact_valuation_oracle(const QuadraticHGParams& params, long p, unsigned long k) {
  return detail::valuation_by_factoring(params, p, k);
}

SeriesClass asymptotic_boundedness_shortcut(const HypergeomParams& params) {
  if (params.m() > params.n() + 1) return SeriesClass::all_primes_bounded;
  if (params.m() < params.n() + 1) return SeriesClass::no_primes_bounded;
  return SeriesClass::regular_singular;
}

GoodPrimeBound good_prime_bound(const HypergeomParams& params) {
  mpz_class threshold(params.modulus());
  for (const Rational& a : params.normalized_alpha())
    for (const Rational& b : params.normalized_beta()) {
      if (a == b) continue;
      Rational gap = a > b ? a - b : b - a;
      mpz_class inv_ceil;
      mpz_cdiv_q(inv_ceil.get_mpz_t(), gap.get_den_mpz_t(), gap.get_num_mpz_t());
      threshold = std::max(threshold, inv_ceil);
    }
  return GoodPrimeBound{narrow_to_long(threshold, "good prime threshold")};
}

GoodPrimeBound good_prime_bound(const QuadraticHGParams& params) {
  mpz_class threshold = 2;
  const auto fold = [&threshold](const mpz_class& z) {
    threshold = std::max(threshold, mpz_class(abs(z)));
  };
  fold(params.a().get_den());
  fold(params.b().get_den());
  fold(params.c().get_den());
  fold(params.D().get_num());
  fold(params.D().get_den());
  fold(params.discriminant());
  return GoodPrimeBound{narrow_to_long(threshold, "good prime threshold")};
}

bool is_good_prime(const HypergeomParams& params, long p) {
  if (!is_prime(p)) return false;
  const auto unit_shift = [p](const Rational& x) {
    if (is_integer(x)) return true;  // x normalizes to 1; the shifted value is 0
    if (mpz_divisible_ui_p(x.get_den_mpz_t(), static_cast<unsigned long>(p))) return false;
    Rational shifted = x - 1;
    return !mpz_divisible_ui_p(shifted.get_num_mpz_t(), static_cast<unsigned long>(p));
  };
  for (const Rational& a : params.normalized_alpha())
    if (!unit_shift(a)) return false;
  for (const Rational& b : params.normalized_beta())
    if (!unit_shift(b)) return false;
  for (const Rational& a : params.normalized_alpha())
    for (const Rational& b : params.normalized_beta()) {
      if (a == b) continue;
      if (valuation(a - b, p) != 0) return false;
    }
  return true;
}

bool is_good_prime(const QuadraticHGParams& params, long p) {
  if (p == 2 || !is_prime(p)) return false;
  const auto divides = [p](const mpz_class& z) {
    return mpz_divisible_ui_p(z.get_mpz_t(), static_cast<unsigned long>(p)) != 0;
  };
  return !divides(params.a().get_den()) && !divides(params.b().get_den()) &&
         !divides(params.c().get_den()) && !divides(params.D().get_num()) &&
         !divides(params.D().get_den()) && !divides(params.discriminant());
}

bool is_split(const QuadraticHGParams& params, long p) {
  return kronecker_symbol(params.discriminant(), mpz_class(p)) == 1;
}

bool is_good_split_prime(const QuadraticHGParams& params, long p) {
  return is_good_prime(params, p) && is_split(params, p);
}

}  // namespace hyp
