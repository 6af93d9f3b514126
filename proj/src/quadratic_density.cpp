#include "hyp/quadratic_density.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hyp {

namespace {

bool bk_inequality(const QuadraticHGParams& params, long w) {
  const Rational lhs = fractional_part(Rational(-w) * params.normalized_c());
  if (params.integral_trace()) {
    // the modulus is even, so w is odd and {-w/2} is exactly 1/2
    return lhs <= fractional_part(Rational(-w) / 2);
  }
  return 2 * lhs <= fractional_part(Rational(-2 * w) * params.normalized_a());
}

long default_modulus(const QuadraticHGParams& params) {
  mpz_class lcm;
  mpz_class disc_abs = abs(params.discriminant());
  if (params.integral_trace()) {
    mpz_lcm(lcm.get_mpz_t(), params.normalized_c().get_den_mpz_t(),
            mpz_class(2 * disc_abs).get_mpz_t());
  } else {
    mpz_lcm(lcm.get_mpz_t(), params.normalized_a().get_den_mpz_t(),
            params.normalized_c().get_den_mpz_t());
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), disc_abs.get_mpz_t());
  }
  if (!mpz_fits_slong_p(lcm.get_mpz_t()))
    throw std::overflow_error("class modulus does not fit in a long");
  return static_cast<long>(lcm.get_si());
}

}  // namespace

bool splits(const CongruenceClass& u, const mpz_class& discriminant) {
  return kronecker_symbol(discriminant, mpz_class(u.residue)) == 1;
}

QuadraticDensityReport bounded_class_set_at_modulus(const QuadraticHGParams& params,
                                                    long modulus) {
  const long base = default_modulus(params);
  if (modulus % base != 0)
    throw std::invalid_argument("modulus must be a multiple of " + std::to_string(base));
  QuadraticDensityReport report;
  report.modulus = modulus;
  report.trace_case =
      params.integral_trace() ? TraceCase::integral : TraceCase::nonintegral;
  report.fundamental_discriminant = static_cast<long>(params.discriminant().get_si());
  const std::vector<long> closed = power_closed_units(
      modulus, [&](long w) { return bk_inequality(params, w); });
  for (long u : closed)
    if (kronecker_symbol(params.discriminant(), mpz_class(u)) == 1)
      report.bounded_classes.push_back(u);
  report.density_lower = Rational(static_cast<long>(report.bounded_classes.size()),
                                  euler_phi(modulus));
  report.density_lower.canonicalize();
  return report;
}

QuadraticDensityReport bounded_class_set(const QuadraticHGParams& params) {
  return bounded_class_set_at_modulus(params, default_modulus(params));
}

bool zero_density_quadratic(const QuadraticHGParams& params) {
  if (params.integral_trace()) return params.normalized_c() < Rational(1, 2);
  return 2 * fractional_part(-params.normalized_c()) >
         fractional_part(-2 * params.normalized_a());
}

QuadraticWitness unbounded_witness_quadratic(const QuadraticHGParams& params, long p,
                                             int depth, std::uint64_t scan_limit) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  if (!is_good_prime(params, p)) throw std::domain_error("bad prime");
  if (!is_split(params, p))
    throw std::domain_error("p = " + std::to_string(p) + " does not split");
  QuadraticWitness witness;
  if (depth == 0) {
    witness.found = true;
    witness.index = 0;
    return witness;
  }
  QuadraticTermValuation engine(params, p);
  const RationalExpansion& lower = engine.lower_expansion();

  std::vector<std::uint64_t> hits;
  for (std::uint64_t j = 0; j <= scan_limit; ++j) {
    const int g = lower.digit(j);
    if (g > engine.plus_stream().digit(j) && g > engine.minus_stream().digit(j))
      hits.push_back(j);
  }
  const std::size_t r = static_cast<std::size_t>(depth);
  if (hits.size() < r) return witness;  // inconclusive: scan too short or p bounded

  for (std::size_t w = 0; w + r <= hits.size(); ++w) {
    mpz_class k = 0;
    for (std::size_t i = 0; i < r; ++i) {
      const std::uint64_t j = hits[w + i];
      mpz_class pj;
      mpz_pow_ui(pj.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(j));
      k += (p - lower.digit(j)) * pj;
    }
    const Valuation v = engine.at(k);
    if (!v.infinite && v.value <= -depth) {
      witness.found = true;
      witness.index = k;
      witness.valuation = v.value;
      witness.digit_positions.assign(hits.begin() + static_cast<long>(w),
                                     hits.begin() + static_cast<long>(w + r));
      return witness;
    }
  }
  return witness;
}

SplitBoundObservation split_upper_bound_check_one(const QuadraticHGParams& params,
                                                  long p, unsigned long k_limit) {
  if (!is_good_prime(params, p)) throw std::domain_error("bad prime");
  SplitBoundObservation obs;
  obs.p = p;
  obs.split = is_split(params, p);
  obs.min_valuation = 0;  // A_0 = 1
  obs.argmin = 0;
  CoefficientSequence seq(params);
  for (unsigned long k = 1; k <= k_limit; ++k) {
    seq.advance();
    const long v = valuation(seq.value(), p);
    if (v < obs.min_valuation) {
      obs.min_valuation = v;
      obs.argmin = k;
    }
  }
  return obs;
}

std::vector<SplitBoundObservation> split_upper_bound_check(
    const QuadraticHGParams& params, const std::vector<long>& primes,
    unsigned long k_limit) {
  std::vector<SplitBoundObservation> out;
  out.reserve(primes.size());
  for (long p : primes) out.push_back(split_upper_bound_check_one(params, p, k_limit));
  return out;
}

}  // namespace hyp
