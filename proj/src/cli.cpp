#include "hyp/cli.hpp"

#include "hyp/hypergeom.hpp"
#include "hyp/padic.hpp"
#include "hyp/quadratic_density.hpp"
#include "hyp/rational_density.hpp"
#include "hyp/schwarz.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace hyp::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string token = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (token.empty()) throw UsageError("empty entry in rational list '" + text + "'");
    out.push_back(parse_rational(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Embedding parse_embedding(const std::string& text) {
  if (text == "+" || text == "plus") return Embedding::plus;
  if (text == "-" || text == "minus") return Embedding::minus;
  throw UsageError("embedding must be + or -");
}

json fraction_json(const Rational& x) {
  return json{{"num", static_cast<long>(x.get_num().get_si())},
              {"den", static_cast<long>(x.get_den().get_si())}};
}

std::string valuation_text(const Valuation& v) {
  return v.infinite ? "inf" : std::to_string(v.value);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f.good()) throw std::runtime_error("write failure on " + path);
}

// ---------------------------------------------------------------------------
// digits

struct DigitsOpts {
  long p = 0;
  std::string value;
  std::string a, b = "1", disc;
  std::string embedding = "+";
  std::uint64_t count = 16;
  bool json_mode = false;
};

int run_digits(const DigitsOpts& opt, std::ostream& out) {
  if (!opt.value.empty() && !opt.a.empty())
    throw UsageError("digits takes --value or --a/--disc, not both");
  if (!opt.value.empty()) {
    const RationalExpansion e = rational_expansion(parse_rational(opt.value), opt.p);
    if (opt.json_mode) {
      out << json{{"p", e.p}, {"preperiod", e.preperiod}, {"period", e.period}}.dump()
          << "\n";
    } else {
      out << e.compact_string() << "\n";
    }
    return 0;
  }
  if (opt.a.empty() || opt.disc.empty())
    throw UsageError("digits needs --value, or --a/--disc for quadratic values");
  QuadraticDigitStream stream(parse_rational(opt.a), parse_rational(opt.b),
                              parse_rational(opt.disc), opt.p,
                              parse_embedding(opt.embedding));
  std::vector<int> digits;
  for (std::uint64_t n = 0; n < opt.count; ++n) digits.push_back(stream.digit(n));
  if (opt.json_mode) {
    out << json{{"p", opt.p}, {"digits", digits}}.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < digits.size(); ++i) out << (i ? "," : "") << digits[i];
    out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// carries

struct CarriesOpts {
  long p = 0;
  std::string value;
  std::string k = "0";
  bool json_mode = false;
};

int run_carries(const CarriesOpts& opt, std::ostream& out) {
  const RationalExpansion e = rational_expansion(parse_rational(opt.value), opt.p);
  const CarryCount c = carry_count(e, mpz_class(opt.k));
  if (opt.json_mode) {
    json j{{"p", opt.p}, {"k", opt.k}, {"digits_inspected", c.digits_inspected}};
    if (c.infinite)
      j["carries"] = "infinity";
    else
      j["carries"] = c.count;
    out << j.dump() << "\n";
  } else {
    out << (c.infinite ? std::string("infinity") : std::to_string(c.count)) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// valuation

struct ValuationOpts {
  long p = 0;
  std::string alpha, beta;
  std::string a, b = "1", c, disc;
  unsigned long kmax = 50;
  bool oracle = false;
};

int run_valuation(const ValuationOpts& opt, std::ostream& out) {
  const bool quadratic = !opt.a.empty();
  if (quadratic == !opt.alpha.empty())
    throw UsageError("valuation needs either --alpha/--beta or --a/--c/--disc");
  if (opt.oracle) {
    std::optional<CoefficientSequence> seq;
    if (quadratic)
      seq.emplace(QuadraticHGParams(parse_rational(opt.a), parse_rational(opt.b),
                                    parse_rational(opt.c), parse_rational(opt.disc)));
    else
      seq.emplace(HypergeomParams(parse_rational_list(opt.alpha),
                                  parse_rational_list(opt.beta)));
    for (unsigned long k = 0; k <= opt.kmax; ++k) {
      if (k > 0) seq->advance();
      out << k << '\t'
          << (seq->value() == 0 ? std::string("inf")
                                : std::to_string(valuation(seq->value(), opt.p)))
          << "\n";
    }
    return 0;
  }
  if (quadratic) {
    QuadraticTermValuation engine(
        QuadraticHGParams(parse_rational(opt.a), parse_rational(opt.b),
                          parse_rational(opt.c), parse_rational(opt.disc)),
        opt.p);
    for (unsigned long k = 0; k <= opt.kmax; ++k)
      out << k << '\t' << valuation_text(engine.at(mpz_class(static_cast<long>(k)))) << "\n";
  } else {
    const RationalTermValuation engine(
        HypergeomParams(parse_rational_list(opt.alpha), parse_rational_list(opt.beta)),
        opt.p);
    for (unsigned long k = 0; k <= opt.kmax; ++k)
      out << k << '\t' << valuation_text(engine.at(mpz_class(static_cast<long>(k)))) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// density

struct DensityRationalOpts {
  std::string alpha, beta;
  bool json_mode = false;
};

int run_density_rational(const DensityRationalOpts& opt, std::ostream& out) {
  const HypergeomParams params(parse_rational_list(opt.alpha),
                               parse_rational_list(opt.beta));
  const SeriesClass cls = asymptotic_boundedness_shortcut(params);
  if (cls != SeriesClass::regular_singular) {
    const bool all = cls == SeriesClass::all_primes_bounded;
    if (opt.json_mode) {
      out << json{{"classification", all ? "all_primes_bounded" : "no_primes_bounded"},
                  {"density", fraction_json(Rational(all ? 1 : 0))}}
                 .dump(2)
          << "\n";
    } else {
      out << (all ? "every prime is bounded (more upper than lower parameters)"
                  : "no prime is bounded (more lower than upper parameters)")
          << "\n"
          << "density = " << (all ? 1 : 0) << "\n";
    }
    return 0;
  }
  const RationalDensityReport report = bounded_class_set(params);
  if (opt.json_mode) {
    out << json{{"modulus", report.modulus},
                {"bounded_classes", report.bounded_classes},
                {"density", fraction_json(report.density)},
                {"good_prime_threshold", report.good_prime_threshold},
                {"terminating", report.terminating}}
               .dump(2)
        << "\n";
    return 0;
  }
  out << "modulus = " << report.modulus << "\n";
  out << "bounded classes mod " << report.modulus << ":";
  for (long u : report.bounded_classes) out << ' ' << u;
  out << "\n";
  out << "good prime threshold = " << report.good_prime_threshold << "\n";
  if (report.terminating) out << "terminating series (polynomial)\n";
  out << "density = " << to_string(report.density) << "\n";
  return 0;
}

struct DensityQuadraticOpts {
  std::string a, b = "1", c, disc;
  bool json_mode = false;
};

int run_density_quadratic(const DensityQuadraticOpts& opt, std::ostream& out) {
  const QuadraticHGParams params(parse_rational(opt.a), parse_rational(opt.b),
                                 parse_rational(opt.c), parse_rational(opt.disc));
  const QuadraticDensityReport report = bounded_class_set(params);
  const char* trace =
      report.trace_case == TraceCase::integral ? "integral" : "nonintegral";
  if (opt.json_mode) {
    out << json{{"modulus", report.modulus},
                {"bounded_classes", report.bounded_classes},
                {"density", fraction_json(report.density_lower)},
                {"upper_bound", fraction_json(report.density_upper)},
                {"conditional_exact", report.conditional_exact},
                {"trace_case", trace},
                {"fundamental_discriminant", report.fundamental_discriminant}}
               .dump(2)
        << "\n";
    return 0;
  }
  out << "modulus = " << report.modulus << "\n";
  out << "fundamental discriminant = " << report.fundamental_discriminant << "\n";
  out << "trace case = " << trace << "\n";
  out << "bounded split classes mod " << report.modulus << ":";
  for (long u : report.bounded_classes) out << ' ' << u;
  out << "\n";
  out << "upper bound = 1/2 (split primes only)\n";
  out << "density = " << to_string(report.density_lower)
      << " (exact under digit conjecture)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// search

struct SearchOpts {
  int max_height = 48;
  std::string threshold = "1/4";
  std::string out_path, json_path;
  int workers = 0;
  bool serial = false;
};

int run_search(const SearchOpts& opt, std::ostream& out) {
  SearchConfig config;
  config.max_height = opt.max_height;
  config.threshold = parse_rational(opt.threshold);
  config.output_path = opt.out_path;
  config.json_path = opt.json_path;
  config.worker_count = opt.workers;
  const std::vector<SearchRecord> records =
      opt.serial ? sweep_serial(config) : sweep(config);
  for (const SearchRecord& r : records) {
    out << to_string(r.a) << '\t' << to_string(r.c) << '\t' << to_string(r.density);
    if (!r.half_fields.empty()) {
      out << "\thalf-density fields:";
      for (const AttainingField& f : r.half_fields) out << ' ' << f.d;
    }
    out << "\n";
  }
  out << records.size() << " pairs above threshold " << to_string(config.threshold)
      << " at height " << config.max_height << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// witness

struct WitnessOpts {
  long p = 0;
  std::string alpha, beta;
  std::string a, b = "1", c, disc;
  int depth = 3;
  std::uint64_t scan_limit = 1000;
  bool json_mode = false;
};

int run_witness(const WitnessOpts& opt, std::ostream& out) {
  const bool quadratic = !opt.a.empty();
  if (quadratic == !opt.alpha.empty())
    throw UsageError("witness needs either --alpha/--beta or --a/--c/--disc");
  if (!quadratic) {
    const HypergeomParams params(parse_rational_list(opt.alpha),
                                 parse_rational_list(opt.beta));
    const RationalWitness w = unbounded_witness(params, opt.p, opt.depth);
    if (opt.json_mode) {
      out << json{{"p", opt.p},
                  {"k", w.index.get_str()},
                  {"valuation", w.valuation},
                  {"digit_index", w.digit_index}}
                 .dump()
          << "\n";
    } else {
      out << "k = " << w.index.get_str() << "\n"
          << "nu_" << opt.p << "(A_k) = " << w.valuation << "\n";
    }
    return 0;
  }
  const QuadraticHGParams params(parse_rational(opt.a), parse_rational(opt.b),
                                 parse_rational(opt.c), parse_rational(opt.disc));
  const QuadraticWitness w =
      unbounded_witness_quadratic(params, opt.p, opt.depth, opt.scan_limit);
  if (opt.json_mode) {
    json j{{"p", opt.p}, {"found", w.found}};
    if (w.found) {
      j["k"] = w.index.get_str();
      j["valuation"] = w.valuation;
      j["digit_positions"] = w.digit_positions;
    }
    out << j.dump() << "\n";
    return 0;
  }
  if (!w.found) {
    out << "inconclusive (conjecture-conditional): no witness within scan limit "
        << opt.scan_limit << "\n";
    return 0;
  }
  out << "k = " << w.index.get_str() << "\n"
      << "nu_" << opt.p << "(A_k) = " << w.valuation << "\n"
      << "digit positions:";
  for (std::uint64_t j : w.digit_positions) out << ' ' << j;
  out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// digit-stats

struct DigitStatsOpts {
  long p = 0;
  std::string a, b = "1", disc;
  std::string embedding = "+";
  std::uint64_t stride = 1, offset = 0;
  std::string lo = "0", hi = "1";
  std::uint64_t count = 1000;
  bool json_mode = false;
};

int run_digit_stats(const DigitStatsOpts& opt, std::ostream& out) {
  QuadraticDigitStream stream(parse_rational(opt.a), parse_rational(opt.b),
                              parse_rational(opt.disc), opt.p,
                              parse_embedding(opt.embedding));
  const WindowStats stats =
      digit_window_statistics(stream, opt.stride, opt.offset, parse_rational(opt.lo),
                              parse_rational(opt.hi), opt.count);
  if (opt.json_mode) {
    out << json{{"hit_ratio", stats.hit_ratio},
                {"hits", stats.hit_positions.size()},
                {"samples", stats.samples},
                {"hit_positions", stats.hit_positions}}
               .dump()
        << "\n";
    return 0;
  }
  out << "hits = " << stats.hit_positions.size() << " of " << stats.samples
      << " (ratio " << stats.hit_ratio << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::string alpha, beta;
  std::string a, b = "1", c, disc;
  long prime_max = 200;
  unsigned long kmax = 2000;
  int depth = 3;
  std::uint64_t scan_limit = 1000;
  int workers = 0;
  bool json_mode = false;
  std::string out_path;
};

struct VerifyRow {
  long p = 0;
  std::string status;   // bounded | witnessed | inconclusive | skipped | violation
  std::string detail;
  json extra;
};

int emit_verify(const std::vector<VerifyRow>& rows, const VerifyOpts& opt,
                std::ostream& out) {
  std::ostringstream text;
  json jrows = json::array();
  long violations = 0;
  for (const VerifyRow& row : rows) {
    text << "p=" << row.p << ' ' << row.status
         << (row.detail.empty() ? "" : ": " + row.detail) << "\n";
    json j = row.extra;
    j["p"] = row.p;
    j["status"] = row.status;
    jrows.push_back(std::move(j));
    if (row.status == "violation") ++violations;
  }
  text << rows.size() << " primes examined, " << violations << " violations\n";
  const std::string report =
      opt.json_mode ? json{{"rows", jrows}, {"violations", violations}}.dump(2) + "\n"
                    : text.str();
  out << report;
  if (!opt.out_path.empty()) write_text_file(opt.out_path, report);
  return violations == 0 ? 0 : 1;
}

int run_verify_rational(const VerifyOpts& opt, std::ostream& out) {
  const HypergeomParams params(parse_rational_list(opt.alpha),
                               parse_rational_list(opt.beta));
  const SeriesClass cls = asymptotic_boundedness_shortcut(params);
  if (cls != SeriesClass::regular_singular) {
    out << "nothing to verify: "
        << (cls == SeriesClass::all_primes_bounded ? "every prime is bounded"
                                                   : "no prime is bounded")
        << "\n";
    return 0;
  }
  const RationalDensityReport report = bounded_class_set(params);
  const std::vector<long> primes = primes_up_to(opt.prime_max);
  std::vector<VerifyRow> rows(primes.size());
  const int threads = opt.workers > 0 ? opt.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(primes.size()); ++i) {
    const long p = primes[static_cast<std::size_t>(i)];
    VerifyRow& row = rows[static_cast<std::size_t>(i)];
    row.p = p;
    try {
      if (p <= report.good_prime_threshold || !is_good_prime(params, p)) {
        row.status = "skipped";
        row.detail = "below the good-prime threshold";
      } else {
        const long u = p % report.modulus;
        const bool bounded = std::binary_search(report.bounded_classes.begin(),
                                                report.bounded_classes.end(), u);
        if (bounded) {
          const RationalTermValuation engine(params, p);
          const ScanResult scan = min_valuation_scan(engine, opt.kmax);
          row.extra = json{{"class", u}, {"min_valuation", scan.min_value}};
          if (scan.min_value >= 0) {
            row.status = "bounded";
            row.detail = "integral over k <= " + std::to_string(opt.kmax);
          } else {
            row.status = "violation";
            row.detail = "predicted bounded but nu = " +
                         std::to_string(scan.min_value) + " at k = " +
                         std::to_string(scan.argmin);
          }
        } else {
          const RationalWitness w = unbounded_witness(params, p, opt.depth);
          row.status = "witnessed";
          row.detail = "unbounded: nu(A_k) = " + std::to_string(w.valuation) +
                       " at k = " + w.index.get_str();
          row.extra = json{{"class", u},
                           {"witness_k", w.index.get_str()},
                           {"valuation", w.valuation}};
        }
      }
    } catch (const std::exception& e) {
      row.status = "violation";
      row.detail = e.what();
    }
  }
  return emit_verify(rows, opt, out);
}

int run_verify_quadratic(const VerifyOpts& opt, std::ostream& out) {
  const QuadraticHGParams params(parse_rational(opt.a), parse_rational(opt.b),
                                 parse_rational(opt.c), parse_rational(opt.disc));
  const QuadraticDensityReport report = bounded_class_set(params);
  const std::vector<long> primes = primes_up_to(opt.prime_max);
  std::vector<VerifyRow> rows(primes.size());
  const int threads = opt.workers > 0 ? opt.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(primes.size()); ++i) {
    const long p = primes[static_cast<std::size_t>(i)];
    VerifyRow& row = rows[static_cast<std::size_t>(i)];
    row.p = p;
    try {
      if (!is_good_prime(params, p)) {
        row.status = "skipped";
        row.detail = "divides a parameter or the discriminant";
      } else if (!is_split(params, p)) {
        // the numerator never cancels these primes; the lower parameter does
        const unsigned long limit =
            std::min<unsigned long>(opt.kmax, static_cast<unsigned long>(2 * p + 50));
        const SplitBoundObservation obs = split_upper_bound_check_one(params, p, limit);
        row.extra = json{{"min_valuation", obs.min_valuation},
                         {"argmin", obs.argmin}};
        if (obs.min_valuation < 0) {
          row.status = "witnessed";
          row.detail = "nonsplit: nu = " + std::to_string(obs.min_valuation) +
                       " at k = " + std::to_string(obs.argmin);
        } else if (limit < static_cast<unsigned long>(p)) {
          // k! cannot contribute a factor of p before k reaches p
          row.status = "inconclusive";
          row.detail = "scan limit " + std::to_string(limit) +
                       " too short to engage the denominator at p = " + std::to_string(p);
        } else {
          row.status = "violation";
          row.detail = "nonsplit prime stayed integral over k <= " + std::to_string(limit);
        }
      } else {
        const long u = p % report.modulus;
        const bool bounded = std::binary_search(report.bounded_classes.begin(),
                                                report.bounded_classes.end(), u);
        if (bounded) {
          QuadraticTermValuation engine(params, p);
          const ScanResult scan = min_valuation_scan(engine, opt.kmax);
          row.extra = json{{"class", u}, {"min_valuation", scan.min_value}};
          if (scan.min_value >= 0) {
            row.status = "bounded";
            row.detail = "split, integral over k <= " + std::to_string(opt.kmax);
          } else {
            row.status = "violation";
            row.detail = "predicted bounded but nu = " + std::to_string(scan.min_value) +
                         " at k = " + std::to_string(scan.argmin);
          }
        } else {
          const QuadraticWitness w =
              unbounded_witness_quadratic(params, p, opt.depth, opt.scan_limit);
          row.extra = json{{"class", u}, {"found", w.found}};
          if (w.found) {
            row.status = "witnessed";
            row.detail = "split, unbounded: nu = " + std::to_string(w.valuation) +
                         " at k = " + w.index.get_str();
          } else {
            row.status = "inconclusive";
            row.detail = "(conjecture-conditional) no witness within scan limit";
          }
        }
      }
    } catch (const std::exception& e) {
      row.status = "violation";
      row.detail = e.what();
    }
  }
  return emit_verify(rows, opt, out);
}

int run_verify(const VerifyOpts& opt, std::ostream& out) {
  const bool quadratic = !opt.a.empty();
  if (quadratic == !opt.alpha.empty())
    throw UsageError("verify needs either --alpha/--beta or --a/--c/--disc");
  return quadratic ? run_verify_quadratic(opt, out) : run_verify_rational(opt, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact densities of p-adically bounded primes for hypergeometric series"};
  app.name("hypdensity");
  app.require_subcommand(1);

  DigitsOpts digits_opt;
  auto* digits = app.add_subcommand("digits", "p-adic digit expansions");
  digits->add_option("--p", digits_opt.p, "prime")->required();
  digits->add_option("--value", digits_opt.value, "rational value to expand");
  digits->add_option("--a", digits_opt.a, "rational part a (quadratic mode: a + b sqrt(D) - 1)");
  digits->add_option("--b", digits_opt.b, "coefficient of sqrt(D)");
  digits->add_option("--disc", digits_opt.disc, "D under the square root");
  digits->add_option("--embedding", digits_opt.embedding, "root embedding, + or -");
  digits->add_option("--count", digits_opt.count, "digits to print (quadratic mode)");
  digits->add_flag("--json", digits_opt.json_mode, "JSON output");

  CarriesOpts carries_opt;
  auto* carries = app.add_subcommand("carries", "carries of base-p addition x + k");
  carries->add_option("--p", carries_opt.p, "prime")->required();
  carries->add_option("--value", carries_opt.value, "p-integral rational x")->required();
  carries->add_option("--k", carries_opt.k, "nonnegative integer addend")->required();
  carries->add_flag("--json", carries_opt.json_mode, "JSON output");

  ValuationOpts val_opt;
  auto* val = app.add_subcommand("valuation", "coefficient valuations nu_p(A_k)");
  val->add_option("--p", val_opt.p, "prime")->required();
  val->add_option("--alpha", val_opt.alpha, "comma-separated upper parameters");
  val->add_option("--beta", val_opt.beta, "comma-separated lower parameters");
  val->add_option("--a", val_opt.a, "quadratic: rational part of the upper pair");
  val->add_option("--b", val_opt.b, "quadratic: coefficient of sqrt(D)");
  val->add_option("--c", val_opt.c, "quadratic: lower parameter");
  val->add_option("--disc", val_opt.disc, "quadratic: D under the square root");
  val->add_option("--kmax", val_opt.kmax, "last index to print");
  val->add_flag("--oracle", val_opt.oracle, "factor the exact coefficients instead");

  auto* density = app.add_subcommand("density", "densities of bounded primes");
  density->require_subcommand(1);
  DensityRationalOpts dr_opt;
  auto* dr = density->add_subcommand("rational", "rational parameters");
  dr->add_option("--alpha", dr_opt.alpha, "comma-separated upper parameters")->required();
  dr->add_option("--beta", dr_opt.beta, "comma-separated lower parameters");
  dr->add_flag("--json", dr_opt.json_mode, "JSON output");
  DensityQuadraticOpts dq_opt;
  auto* dq = density->add_subcommand("quadratic", "conjugate quadratic upper parameters");
  dq->add_option("--a", dq_opt.a, "rational part of the upper pair")->required();
  dq->add_option("--b", dq_opt.b, "coefficient of sqrt(D), nonzero");
  dq->add_option("--c", dq_opt.c, "lower parameter")->required();
  dq->add_option("--disc", dq_opt.disc, "D under the square root")->required();
  dq->add_flag("--json", dq_opt.json_mode, "JSON output");

  SearchOpts search_opt;
  auto* search = app.add_subcommand("search", "sweep parameter pairs for large densities");
  search->add_option("--max-height", search_opt.max_height, "denominator bound");
  search->add_option("--threshold", search_opt.threshold, "keep densities strictly above");
  search->add_option("--out", search_opt.out_path, "CSV output path");
  search->add_option("--json", search_opt.json_path, "JSON sidecar path");
  search->add_option("--workers", search_opt.workers, "worker threads (0 = all)");
  search->add_flag("--serial", search_opt.serial, "use the serial reference sweep");

  WitnessOpts wit_opt;
  auto* wit = app.add_subcommand("witness", "explicit unboundedness witnesses");
  wit->add_option("--p", wit_opt.p, "prime")->required();
  wit->add_option("--alpha", wit_opt.alpha, "comma-separated upper parameters");
  wit->add_option("--beta", wit_opt.beta, "comma-separated lower parameters");
  wit->add_option("--a", wit_opt.a, "quadratic: rational part of the upper pair");
  wit->add_option("--b", wit_opt.b, "quadratic: coefficient of sqrt(D)");
  wit->add_option("--c", wit_opt.c, "quadratic: lower parameter");
  wit->add_option("--disc", wit_opt.disc, "quadratic: D under the square root");
  wit->add_option("--depth", wit_opt.depth, "forced valuation depth");
  wit->add_option("--scan-limit", wit_opt.scan_limit, "digit positions to scan (quadratic)");
  wit->add_flag("--json", wit_opt.json_mode, "JSON output");

  DigitStatsOpts ds_opt;
  auto* ds = app.add_subcommand("digit-stats", "digit distribution along a progression");
  ds->add_option("--p", ds_opt.p, "prime")->required();
  ds->add_option("--a", ds_opt.a, "rational part a (stream of a + b sqrt(D) - 1)")->required();
  ds->add_option("--b", ds_opt.b, "coefficient of sqrt(D)");
  ds->add_option("--disc", ds_opt.disc, "D under the square root")->required();
  ds->add_option("--embedding", ds_opt.embedding, "root embedding, + or -");
  ds->add_option("--r", ds_opt.stride, "progression stride");
  ds->add_option("--s", ds_opt.offset, "progression offset");
  ds->add_option("--u", ds_opt.lo, "window lower endpoint in [0,1)");
  ds->add_option("--v", ds_opt.hi, "window upper endpoint in (0,1]");
  ds->add_option("--count", ds_opt.count, "samples");
  ds->add_flag("--json", ds_opt.json_mode, "JSON output");

  VerifyOpts verify_opt;
  auto* verify = app.add_subcommand("verify", "check density predictions against valuations");
  verify->add_option("--alpha", verify_opt.alpha, "comma-separated upper parameters");
  verify->add_option("--beta", verify_opt.beta, "comma-separated lower parameters");
  verify->add_option("--a", verify_opt.a, "quadratic: rational part of the upper pair");
  verify->add_option("--b", verify_opt.b, "quadratic: coefficient of sqrt(D)");
  verify->add_option("--c", verify_opt.c, "quadratic: lower parameter");
  verify->add_option("--disc", verify_opt.disc, "quadratic: D under the square root");
  verify->add_option("--prime-max", verify_opt.prime_max, "largest prime to examine");
  verify->add_option("--kmax", verify_opt.kmax, "coefficient scan depth");
  verify->add_option("--depth", verify_opt.depth, "witness depth");
  verify->add_option("--scan-limit", verify_opt.scan_limit, "witness digit scan limit");
  verify->add_option("--workers", verify_opt.workers, "worker threads (0 = all)");
  verify->add_flag("--json", verify_opt.json_mode, "JSON output");
  verify->add_option("--out", verify_opt.out_path, "also write the report here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (digits->parsed()) return run_digits(digits_opt, out);
    if (carries->parsed()) return run_carries(carries_opt, out);
    if (val->parsed()) return run_valuation(val_opt, out);
    if (dr->parsed()) return run_density_rational(dr_opt, out);
    if (dq->parsed()) return run_density_quadratic(dq_opt, out);
    if (search->parsed()) return run_search(search_opt, out);
    if (wit->parsed()) return run_witness(wit_opt, out);
    if (ds->parsed()) return run_digit_stats(ds_opt, out);
    if (verify->parsed()) return run_verify(verify_opt, out);
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hyp::cli
