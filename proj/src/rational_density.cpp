#include "hyp/rational_density.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hyp {

namespace {

Rational orbit_frac(long w, const Rational& x) {
  return fractional_part(Rational(-w) * x);
}

void require_regular_singular(const HypergeomParams& params) {
  if (params.m() != params.n() + 1)
    throw std::invalid_argument(
        "density classification needs one more upper than lower parameter; "
        "use the asymptotic shortcut for other shapes");
}

// Sorted dominance at a single orbit element w: every lower fraction must be
// covered by a distinct upper fraction, which for a one-dimensional order
// reduces to comparing the two descending-sorted lists entrywise.
bool dominance_at(const std::vector<Rational>& alpha, const std::vector<Rational>& beta,
                  long w, std::string* note) {
  std::vector<Rational> av;
  av.reserve(alpha.size());
  for (const Rational& a : alpha) av.push_back(orbit_frac(w, a));
  std::vector<Rational> bv;
  bv.reserve(beta.size());
  for (const Rational& b : beta) bv.push_back(orbit_frac(w, b));
  std::sort(av.rbegin(), av.rend());
  std::sort(bv.rbegin(), bv.rend());
  for (std::size_t i = 0; i < bv.size(); ++i) {
    if (bv[i] > av[i]) {
      if (note) {
        std::ostringstream os;
        os << "lower value " << to_string(bv[i]) << " exceeds every unmatched upper value"
           << " (rank " << i + 1 << " at orbit element " << w << ")";
        *note = os.str();
      }
      return false;
    }
  }
  return true;
}

}  // namespace

MajorizationVerdict is_numerator_majorized(const HypergeomParams& params,
                                           const CongruenceClass& u) {
  require_regular_singular(params);
  const long N = params.modulus();
  if (u.modulus != N)
    throw std::invalid_argument("class modulus " + std::to_string(u.modulus) +
                                " does not match the parameter modulus " + std::to_string(N));
  const CongruenceClass cls = make_unit_class(u.residue, N);

  MajorizationVerdict verdict;
  verdict.cls = cls;
  const long ord = multiplicative_order(cls.residue, N);
  long w = 1 % N;
  for (long j = 0; j < ord; ++j) {
    std::string note;
    if (!dominance_at(params.normalized_alpha(), params.normalized_beta(), w, &note)) {
      verdict.majorized = false;
      verdict.failing_j = static_cast<std::uint64_t>(j);
      verdict.failing_note = note;
      return verdict;
    }
    w = static_cast<long>((static_cast<__int128>(w) * cls.residue) % N);
  }
  verdict.majorized = true;
  return verdict;
}

RationalDensityReport bounded_class_set(const HypergeomParams& params) {
  require_regular_singular(params);
  RationalDensityReport report;
  report.modulus = params.modulus();
  report.good_prime_threshold = good_prime_bound(params).threshold;
  report.terminating = params.terminating();
  const long phi = euler_phi(report.modulus);
  if (report.terminating) {
    // a polynomial: every large prime is bounded
    report.bounded_classes = unit_residues(report.modulus);
    report.density = 1;
    return report;
  }
  const auto& alpha = params.normalized_alpha();
  const auto& beta = params.normalized_beta();
  report.bounded_classes = power_closed_units(
      report.modulus,
      [&](long w) { return dominance_at(alpha, beta, w, nullptr); });
  report.density = Rational(static_cast<long>(report.bounded_classes.size()), phi);
  report.density.canonicalize();
  return report;
}

bool zero_density_test(const HypergeomParams& params) {
  require_regular_singular(params);
  if (params.terminating()) return false;
  std::vector<Rational> av = params.normalized_alpha();
  std::vector<Rational> bv = params.normalized_beta();
  std::sort(av.begin(), av.end());
  std::sort(bv.begin(), bv.end());
  for (std::size_t i = 0; i < bv.size(); ++i)
    if (bv[i] < av[i]) return true;
  return false;
}

RationalWitness unbounded_witness(const HypergeomParams& params, long p, int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  const RationalDensityReport report = bounded_class_set(params);
  if (report.terminating)
    throw std::domain_error("no witness exists: the series terminates");
  if (!is_good_prime(params, p) || p <= report.good_prime_threshold)
    throw std::domain_error("p = " + std::to_string(p) +
                            " is not a good prime above the classification threshold");
  const long N = report.modulus;
  const long u = p % N;
  if (std::binary_search(report.bounded_classes.begin(), report.bounded_classes.end(), u))
    throw std::domain_error("no witness exists: p = " + std::to_string(p) +
                            " lies in a bounded class");

  const RationalTermValuation engine(params, p);
  const auto& alpha_exp = engine.alpha_expansions();
  const auto& beta_exp = engine.beta_expansions();
  std::uint64_t start = 0;
  for (const auto& e : alpha_exp) start = std::max<std::uint64_t>(start, e.preperiod.size());
  for (const auto& e : beta_exp) start = std::max<std::uint64_t>(start, e.preperiod.size());
  const long orbit_len = multiplicative_order(p % N, N);
  const long spacing = euler_phi(N);  // common digit period of every parameter

  for (std::uint64_t j = start; j < start + static_cast<std::uint64_t>(orbit_len); ++j) {
    std::vector<int> da, db;
    for (const auto& e : alpha_exp) da.push_back(e.digit(j));
    for (const auto& e : beta_exp) db.push_back(e.digit(j));
    // candidate thresholds: digit values where the lower list has strictly
    // more entries at or above the cut than the upper list
    std::vector<int> cuts = db;
    std::sort(cuts.rbegin(), cuts.rend());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (int cut : cuts) {
      const auto count_ge = [cut](const std::vector<int>& v) {
        return std::count_if(v.begin(), v.end(), [cut](int d) { return d >= cut; });
      };
      if (count_ge(db) <= count_ge(da)) continue;
      // one forced carry per repetition at digit positions j, j+spacing, ...
      mpz_class k = 0;
      mpz_class pos;
      mpz_pow_ui(pos.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(j));
      mpz_class step;
      mpz_pow_ui(step.get_mpz_t(), mpz_class(p).get_mpz_t(), static_cast<unsigned long>(spacing));
      for (int t = 0; t <= depth; ++t) {
        k += (p - cut) * pos;
        pos *= step;
      }
      const Valuation v = engine.at(k);
      if (!v.infinite && v.value <= -(depth + 1))
        return RationalWitness{k, v.value, j};
    }
  }
  throw std::logic_error("witness construction failed to reach the requested depth");
}

std::vector<long> two_f_one_reference_classes(const Rational& a, const Rational& b,
                                              const Rational& c) {
  mpz_class lcm = 1;
  for (const Rational* x : {&a, &b, &c})
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x->get_den_mpz_t());
  if (!mpz_fits_slong_p(lcm.get_mpz_t()))
    throw std::overflow_error("parameter modulus does not fit in a long");
  const long N = static_cast<long>(lcm.get_si());
  return power_closed_units(N, [&](long w) {
    return orbit_frac(w, c) <= std::max(orbit_frac(w, a), orbit_frac(w, b));
  });
}

}  // namespace hyp
