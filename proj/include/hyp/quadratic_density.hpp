#pragma once

#include "hyp/hypergeom.hpp"

#include <optional>
#include <vector>

namespace hyp {

enum class TraceCase { integral, nonintegral };

struct QuadraticDensityReport {
  long modulus = 1;
  std::vector<long> bounded_classes;  // sorted split unit residues
  Rational density_lower = 0;
  Rational density_upper = Rational(1, 2);  // splitting filter cap
  bool conditional_exact = true;  // exact if the digit-distribution conjecture holds
  TraceCase trace_case = TraceCase::nonintegral;
  long fundamental_discriminant = 0;
};

// Class u splits in the field of the given fundamental discriminant.
bool splits(const CongruenceClass& u, const mpz_class& discriminant);

// Bounded split classes and density lower bound for conjugate quadratic
// upper parameters. The modulus is lcm(denom c, 2|disc|) when the trace 2a
// is an integer, and lcm(denom a, denom c, |disc|) otherwise. The result
// never reads b.
QuadraticDensityReport bounded_class_set(const QuadraticHGParams& params);

// Same set computed over a multiple of the default modulus; densities agree
// across refinements, which the tests exercise.
QuadraticDensityReport bounded_class_set_at_modulus(const QuadraticHGParams& params,
                                                    long modulus);

// Closed form for density 0: normalized c below 1/2 in the integral-trace
// case, 2{-c} > {-2a} otherwise.
bool zero_density_quadratic(const QuadraticHGParams& params);

struct QuadraticWitness {
  bool found = false;  // a not-found scan is inconclusive, never "bounded"
  mpz_class index;
  long valuation = 0;
  std::vector<std::uint64_t> digit_positions;
};

// Scans for digit positions where the lower parameter digit exceeds both
// conjugate upper digits, assembles the coefficient index they force, and
// verifies nu_p <= -depth through the carry formula before reporting it.
QuadraticWitness unbounded_witness_quadratic(const QuadraticHGParams& params, long p,
                                             int depth, std::uint64_t scan_limit);

struct SplitBoundObservation {
  long p = 0;
  bool split = false;
  long min_valuation = 0;
  unsigned long argmin = 0;
};

// Exact-coefficient scan of min nu_p(A_k): inert primes accumulate in the
// denominator without numerator cancellation, split bounded primes stay
// nonnegative.
SplitBoundObservation split_upper_bound_check_one(const QuadraticHGParams& params,
                                                  long p, unsigned long k_limit);
std::vector<SplitBoundObservation> split_upper_bound_check(
    const QuadraticHGParams& params, const std::vector<long>& primes,
    unsigned long k_limit);

}  // namespace hyp
