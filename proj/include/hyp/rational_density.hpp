#pragma once

#include "hyp/hypergeom.hpp"

#include <optional>
#include <string>

namespace hyp {

struct MajorizationVerdict {
  CongruenceClass cls;
  bool majorized = false;
  std::optional<std::uint64_t> failing_j;  // first failing power, when not majorized
  std::string failing_note;                // which lower value had no partner
};

struct RationalDensityReport {
  long modulus = 1;
  std::vector<long> bounded_classes;  // sorted unit residues
  Rational density = 0;
  long good_prime_threshold = 0;
  bool terminating = false;
};

// Sorted-dominance check of the fractional orbits {-u^j beta_i} against
// {-u^j alpha_i}, over one full power orbit of u.
MajorizationVerdict is_numerator_majorized(const HypergeomParams& params,
                                           const CongruenceClass& u);

// The bounded congruence classes mod the parameter lcm, with exact density.
// Above the report's good-prime threshold, a prime is bounded (indeed the
// series is p-integral) exactly when its class appears here.
RationalDensityReport bounded_class_set(const HypergeomParams& params);

// Closed form for density = 0: some lower parameter sits strictly below the
// matching upper parameter once both lists are sorted by normalized value.
bool zero_density_test(const HypergeomParams& params);

struct RationalWitness {
  mpz_class index;
  long valuation = 0;          // verified carry-formula valuation at index
  std::uint64_t digit_index = 0;  // digit position the construction targets
};

// For a good prime in an unbounded class: a coefficient index k with
// nu_p(A_k) <= -(depth+1), built from a failing digit position and verified
// before returning.
RationalWitness unbounded_witness(const HypergeomParams& params, long p, int depth);

// Independent route for conjugate-pair 2F1 class sets:
// {-u^j c} <= max({-u^j a}, {-u^j b}) over the power orbit. Used to
// cross-check the n = 2 specialization of bounded_class_set.
std::vector<long> two_f_one_reference_classes(const Rational& a, const Rational& b,
                                              const Rational& c);

}  // namespace hyp
