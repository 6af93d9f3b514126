#pragma once

#include "hyp/numtheory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hyp {

// Eventually periodic base-p expansion of a p-integral rational, least
// significant digit first. Preperiod and period are minimal; period is never
// empty. Immutable and freely shareable between threads.
struct RationalExpansion {
  long p = 0;
  std::vector<int> preperiod;
  std::vector<int> period;

  int digit(std::uint64_t j) const;
  bool all_max_period() const;  // every period digit equals p-1 (value has an integer tail)
  Rational value() const;       // exact reconstruction, for cross-checks
  std::string compact_string() const;  // "d0,d1|e0,e1", preperiod left of '|'
};

// Expansion of x in Z_p. Throws "not p-integral" when p divides denom(x).
RationalExpansion rational_expansion(const Rational& x, long p);

inline int digit_at(const RationalExpansion& x, std::uint64_t j) { return x.digit(j); }

// For reduced a = u/v with 0 < a < 1 and p not dividing v: true iff p > v,
// in which case every digit of a - 1 is nonzero.
bool nonzero_digit_guarantee(const Rational& a, long p);

// r with r^2 = D (mod p^k) and 0 < r < p^k, for odd p, p not dividing D,
// D a residue mod p. The returned root reduces mod p into (0, p/2); the
// other square root is p^k minus it.
mpz_class hensel_sqrt(const mpz_class& D, long p, unsigned k);

enum class Embedding { plus, minus };

// Digit stream of a + b*sqrt(D) - 1 in Z_p at a split prime, realized by
// lifting sqrt(D) mod growing powers of p. digit(n) extends the precision on
// demand; lifts are coherent, so emitted digits never change. Single
// consumer: one stream must not be advanced from two threads at once.
class QuadraticDigitStream {
 public:
  QuadraticDigitStream(const Rational& a, const Rational& b, const Rational& D,
                       long p, Embedding emb);

  int digit(std::uint64_t n);
  long prime() const { return p_; }
  std::uint64_t precision() const { return digits_.size(); }

 private:
  void grow(std::uint64_t digits_needed);

  long p_;
  int sign_;
  mpz_class kernel_;     // squarefree kernel of D (0 when b = 0)
  Rational base_;        // a - 1
  Rational root_scale_;  // value = base_ + root_scale_ * sqrt(kernel_)
  std::vector<int> digits_;
};

QuadraticDigitStream quadratic_digit_stream(const Rational& a, const Rational& b,
                                            const Rational& D, long p,
                                            Embedding emb);

struct WindowStats {
  double hit_ratio = 0.0;
  std::vector<std::uint64_t> hit_positions;
  std::uint64_t samples = 0;
};

// Scans digits at indices s, s+r, ..., s+(count-1)r and reports the fraction
// landing strictly inside (u(p-1), v(p-1)), with the hit indices.
WindowStats digit_window_statistics(QuadraticDigitStream& stream, std::uint64_t r,
                                    std::uint64_t s, const Rational& u,
                                    const Rational& v, std::uint64_t count);

}  // namespace hyp
