#pragma once

#include "hyp/numtheory.hpp"
#include "hyp/padic.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hyp {

// Parameter lists for a generalized hypergeometric series. Construction
// rejects nonpositive-integer lower parameters and cancels upper/lower pairs
// that are exactly equal. The original (post-cancellation) values drive all
// coefficient arithmetic; the mod-Z normalization into (0,1] is what the
// density machinery consumes.
class HypergeomParams {
 public:
  HypergeomParams(std::vector<Rational> alpha, std::vector<Rational> beta);

  const std::vector<Rational>& alpha() const { return alpha_; }
  const std::vector<Rational>& beta() const { return beta_; }
  const std::vector<Rational>& normalized_alpha() const { return norm_alpha_; }
  const std::vector<Rational>& normalized_beta() const { return norm_beta_; }
  std::size_t m() const { return alpha_.size(); }
  std::size_t n() const { return beta_.size(); }
  bool terminating() const { return terminating_; }
  long modulus() const { return modulus_; }  // lcm of parameter denominators

 private:
  std::vector<Rational> alpha_, beta_, norm_alpha_, norm_beta_;
  bool terminating_ = false;
  long modulus_ = 1;
};

// 2F1 with conjugate upper parameters a +- b.sqrt(D) and lower parameter c;
// the series has rational coefficients. D is reduced to its squarefree
// kernel on construction, with sqrt(D) = root_scale * sqrt(kernel).
class QuadraticHGParams {
 public:
  QuadraticHGParams(Rational a, Rational b, Rational c, Rational D);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& D() const { return D_; }
  const mpz_class& kernel() const { return kernel_; }
  const mpz_class& discriminant() const { return discriminant_; }
  const Rational& root_scale() const { return root_scale_; }
  bool integral_trace() const { return integral_trace_; }
  Rational trace_fraction() const;  // {2a}, or 1 when 2a is an integer
  const Rational& normalized_a() const { return norm_a_; }
  const Rational& normalized_c() const { return norm_c_; }

 private:
  Rational a_, b_, c_, D_;
  mpz_class kernel_, discriminant_;
  Rational root_scale_;
  Rational norm_a_, norm_c_;
  bool integral_trace_ = false;
};

// (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1.
Rational rising_factorial(const Rational& x, unsigned long k);

// Exact k-th Taylor coefficient A_k.
Rational coefficient(const HypergeomParams& params, unsigned long k);
Rational coefficient(const QuadraticHGParams& params, unsigned long k);

// Incremental A_0, A_1, ... for coefficient scans; one rational product per
// step instead of a fresh k-term product.
class CoefficientSequence {
 public:
  explicit CoefficientSequence(const HypergeomParams& params);
  explicit CoefficientSequence(const QuadraticHGParams& params);

  unsigned long index() const { return index_; }
  const Rational& value() const { return value_; }
  void advance();

 private:
  enum class Kind { rational, quadratic } kind_;
  std::vector<Rational> alpha_, beta_;  // rational case
  Rational two_a_, norm_, c_;           // quadratic case: P(-j) = j^2 + 2aj + (a^2 - b^2 D)
  unsigned long index_ = 0;
  Rational value_ = 1;
};

// Result of simulating base-p addition of k into a digit stream. The count
// is infinite exactly when the carry runs off into an all-(p-1) tail.
// digits_inspected bounds the digit indices examined; the count only depends
// on the stream through those digits.
struct CarryCount {
  bool infinite = false;
  std::uint64_t count = 0;
  std::uint64_t digits_inspected = 0;
};

CarryCount carry_count(const RationalExpansion& x, const mpz_class& k);
CarryCount carry_count(QuadraticDigitStream& x, const mpz_class& k);

struct Valuation {
  bool infinite = false;  // zero coefficient
  long value = 0;

  bool operator==(const Valuation&) const = default;
};
std::ostream& operator<<(std::ostream& os, const Valuation& v);

// Carry-formula evaluator for a fixed prime: nu_p(A_k) as a sum of carry
// counts of the shifted parameters plus (m-n-1) nu_p(k!). Parameters must be
// p-integral. Cheap per k, valid for arbitrarily large k.
class RationalTermValuation {
 public:
  RationalTermValuation(const HypergeomParams& params, long p);

  Valuation at(const mpz_class& k) const;
  long prime() const { return p_; }
  const std::vector<RationalExpansion>& alpha_expansions() const { return alpha_exp_; }
  const std::vector<RationalExpansion>& beta_expansions() const { return beta_exp_; }

 private:
  long p_;
  long series_excess_;  // m - n - 1
  std::vector<RationalExpansion> alpha_exp_, beta_exp_;
};

// Same, for conjugate quadratic upper parameters at a split prime. Holds the
// two embedding digit streams; advancing them mutates this object, so give
// each worker its own instance.
class QuadraticTermValuation {
 public:
  QuadraticTermValuation(const QuadraticHGParams& params, long p);

  Valuation at(const mpz_class& k);
  long prime() const { return p_; }
  const RationalExpansion& lower_expansion() const { return c_exp_; }
  QuadraticDigitStream& plus_stream() { return plus_; }
  QuadraticDigitStream& minus_stream() { return minus_; }

 private:
  long p_;
  RationalExpansion c_exp_;
  QuadraticDigitStream plus_, minus_;
};

Valuation coefficient_valuation(const HypergeomParams& params, long p, const mpz_class& k);
Valuation coefficient_valuation(QuadraticTermValuation& engine, const mpz_class& k);
Valuation coefficient_valuation(const QuadraticHGParams& params, long p, const mpz_class& k);

struct ScanResult {
  long min_value = 0;
  unsigned long argmin = 0;
};

// min nu_p(A_k) over 0 <= k <= k_max via the carry formula; zero
// coefficients (infinite valuation) do not contribute.
ScanResult min_valuation_scan(const RationalTermValuation& engine, unsigned long k_max);
ScanResult min_valuation_scan(QuadraticTermValuation& engine, unsigned long k_max);

namespace detail {

// nu_p(A_k) by building the exact coefficient and stripping powers of p.
Valuation valuation_by_factoring(const HypergeomParams& params, long p, unsigned long k);
Valuation valuation_by_factoring(const QuadraticHGParams& params, long p, unsigned long k);

// nu_p(A_k) by counting multiples of p^e among the linear factors of the
// rising factorials; exact for any k, including indices far too large to
// expand the product.
Valuation valuation_by_counting(const HypergeomParams& params, long p, const mpz_class& k);

}  // namespace detail

// Independent check of the carry formula: the exact valuation of the exact
// coefficient, never touching digit expansions.
Valuation exact_valuation_oracle(const HypergeomParams& params, long p, const mpz_class& k);
Valuation exact_valuation_oracle(const QuadraticHGParams& params, long p, unsigned long k);

enum class SeriesClass { all_primes_bounded, no_primes_bounded, regular_singular };

// m > n+1: every prime bounded; m < n+1: none; m = n+1: needs density work.
SeriesClass asymptotic_boundedness_shortcut(const HypergeomParams& params);

struct GoodPrimeBound {
  long threshold = 0;
};

// Primes above the threshold are good and classified purely by congruence
// class: max of the parameter lcm and ceil(1 / min distance) over normalized
// parameter pairs.
GoodPrimeBound good_prime_bound(const HypergeomParams& params);
// Quadratic case: bound below which p could divide a parameter denominator,
// D, 2, or the field discriminant.
GoodPrimeBound good_prime_bound(const QuadraticHGParams& params);

// p leaves every normalized shifted parameter a p-adic unit and divides no
// difference of normalized parameters.
bool is_good_prime(const HypergeomParams& params, long p);
bool is_good_prime(const QuadraticHGParams& params, long p);
bool is_split(const QuadraticHGParams& params, long p);
bool is_good_split_prime(const QuadraticHGParams& params, long p);

}  // namespace hyp
