#include "hyp/schwarz.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hyp {

namespace {

using nlohmann::json;

// Numerator of {-w x} over den for reduced x = num/den in (0,1]; all values
// stay far inside 64 bits for sweep-sized moduli.
struct NegOrbitFrac {
  long num, den;
  explicit NegOrbitFrac(const Rational& x)
      : num(static_cast<long>(x.get_num().get_si())),
        den(static_cast<long>(x.get_den().get_si())) {}
  long operator()(long w) const {
    long r = (-((w % den) * (num % den))) % den;
    return r < 0 ? r + den : r;
  }
};

Rational normalize_unit_interval(const Rational& x) {
  Rational f = fractional_part(x);
  return f == 0 ? Rational(1) : f;
}

Rational pair_density_normalized(const Rational& a, const Rational& c) {
  const bool integral_trace = is_integer(2 * a);
  const NegOrbitFrac frac_c(c);
  long modulus;
  std::function<bool(long)> condition;
  if (integral_trace) {
    modulus = std::lcm(frac_c.den, 2L);
    condition = [frac_c](long w) { return 2 * frac_c(w) <= frac_c.den; };
  } else {
    const NegOrbitFrac frac_a(a);
    modulus = std::lcm(frac_a.den, frac_c.den);
    condition = [frac_a, frac_c](long w) {
      // {-w c} <= (1/2) {-2w a}
      return 2 * frac_a.den * frac_c(w) <= frac_c.den * frac_a(2 * w);
    };
  }
  const std::vector<long> classes = power_closed_units(modulus, condition);
  Rational density(static_cast<long>(classes.size()), euler_phi(modulus));
  density.canonicalize();
  return density;
}

SearchRecord build_record(const Rational& a, const Rational& c) {
  SearchRecord record;
  record.a = a;
  record.c = c;
  record.density = pair_density_normalized(a, c);
  if (record.density == Rational(1, 2)) {
    for (long d : candidate_discriminants(a, c)) {
      const QuadraticHGParams params(a, 1, c, Rational(d));
      const Rational filtered = bounded_class_set(params).density_lower;
      if (filtered == Rational(1, 2)) record.half_fields.push_back({d, filtered});
    }
    if (record.half_fields.size() == 1)
      record.unique_half_field = record.half_fields.front().d;
  }
  return record;
}

// reduced fractions in (0,1) with denominator <= max_height, ordered by
// (denominator, numerator); pair i of the sweep is (values[i / n], values[i % n])
std::vector<Rational> enumerate_values(int max_height) {
  if (max_height < 2) throw std::invalid_argument("max_height must be >= 2");
  std::vector<Rational> values;
  for (long den = 2; den <= max_height; ++den)
    for (long num = 1; num < den; ++num)
      if (std::gcd(num, den) == 1) values.emplace_back(num, den);
  return values;
}

bool skip_pair(const Rational& a, const Rational& c) {
  return is_integer(2 * a) && is_integer(2 * c);  // outside the bound's scope
}

std::vector<SearchRecord> collect(const SearchConfig& config,
                                  std::vector<std::unique_ptr<SearchRecord>>&& slots) {
  std::vector<SearchRecord> records;
  for (auto& slot : slots)
    if (slot) records.push_back(std::move(*slot));
  if (!config.output_path.empty() || !config.json_path.empty())
    persist(records, config.output_path, config.json_path);
  return records;
}

json density_json(const Rational& x) {
  return json{{"num", static_cast<long>(x.get_num().get_si())},
              {"den", static_cast<long>(x.get_den().get_si())}};
}

}  // namespace

Rational pair_density(const Rational& a, const Rational& c) {
  return pair_density_normalized(normalize_unit_interval(a), normalize_unit_interval(c));
}

std::vector<long> candidate_discriminants(const Rational& a, const Rational& c) {
  const long lcm = std::lcm(static_cast<long>(a.get_den().get_si()),
                            static_cast<long>(c.get_den().get_si()));
  std::vector<long> candidates;
  for (long t = 1; t <= lcm; ++t) {
    if (lcm % t != 0) continue;
    if (squarefree_kernel(mpz_class(t)) != t) continue;
    if (t != 1) candidates.push_back(t);
    candidates.push_back(-t);
  }
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

std::vector<SearchRecord> sweep(const SearchConfig& config) {
  const std::vector<Rational> values = enumerate_values(config.max_height);
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  std::vector<std::unique_ptr<SearchRecord>> slots(static_cast<std::size_t>(n * n));
  const int threads = config.worker_count > 0 ? config.worker_count : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t i = 0; i < n * n; ++i) {
    const Rational& a = values[static_cast<std::size_t>(i / n)];
    const Rational& c = values[static_cast<std::size_t>(i % n)];
    if (skip_pair(a, c)) continue;
    SearchRecord record = build_record(a, c);
    if (record.density > config.threshold)
      slots[static_cast<std::size_t>(i)] = std::make_unique<SearchRecord>(std::move(record));
  }
  return collect(config, std::move(slots));
}

std::vector<SearchRecord> sweep_serial(const SearchConfig& config) {
  const std::vector<Rational> values = enumerate_values(config.max_height);
  const std::size_t n = values.size();
  std::vector<std::unique_ptr<SearchRecord>> slots(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    const Rational& a = values[i / n];
    const Rational& c = values[i % n];
    if (skip_pair(a, c)) continue;
    SearchRecord record = build_record(a, c);
    if (record.density > config.threshold)
      slots[i] = std::make_unique<SearchRecord>(std::move(record));
  }
  return collect(config, std::move(slots));
}

void bound_audit(const SearchRecord& record) {
  if (is_integer(2 * record.a) && is_integer(2 * record.c)) return;  // hypothesis fails
  if (record.density > Rational(1, 2))
    throw std::logic_error("bound violation: pair density " + to_string(record.density) +
                           " exceeds 1/2 at a = " + to_string(record.a) +
                           ", c = " + to_string(record.c));
  const long modulus = std::lcm(static_cast<long>(record.a.get_den().get_si()),
                                static_cast<long>(record.c.get_den().get_si()));
  for (long d : candidate_discriminants(record.a, record.c)) {
    const QuadraticHGParams params(record.a, 1, record.c, Rational(d));
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), mpz_class(abs(params.discriminant())).get_mpz_t(),
            mpz_class(modulus).get_mpz_t());
    if (g != 1) continue;
    const Rational filtered = bounded_class_set(params).density_lower;
    if (filtered > Rational(1, 4))
      throw std::logic_error("bound violation: coprime-discriminant density " +
                             to_string(filtered) + " exceeds 1/4 at a = " +
                             to_string(record.a) + ", c = " + to_string(record.c) +
                             ", D = " + std::to_string(d));
  }
}

void persist(const std::vector<SearchRecord>& records, const std::string& csv_path,
             const std::string& json_path) {
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot open " + csv_path + " for writing");
    csv << "a,c,D_ac_num,D_ac_den,half_fields\n";
    for (const SearchRecord& r : records) {
      csv << to_string(r.a) << ',' << to_string(r.c) << ',' << r.density.get_num() << ','
          << r.density.get_den() << ',';
      for (std::size_t i = 0; i < r.half_fields.size(); ++i) {
        if (i) csv << ';';
        csv << r.half_fields[i].d;
      }
      csv << '\n';
    }
    if (!csv.good()) throw std::runtime_error("write failure on " + csv_path);
  }
  if (!json_path.empty()) {
    json doc = json::array();
    for (const SearchRecord& r : records) {
      json fields = json::array();
      for (const AttainingField& f : r.half_fields)
        fields.push_back(json{{"d", f.d}, {"density", density_json(f.density)}});
      json rec{{"a", to_string(r.a)},
               {"c", to_string(r.c)},
               {"d_ac", density_json(r.density)},
               {"half_fields", fields}};
      if (r.unique_half_field)
        rec["unique_half_field"] = *r.unique_half_field;
      else
        rec["unique_half_field"] = nullptr;
      doc.push_back(std::move(rec));
    }
    std::ofstream js(json_path, std::ios::trunc);
    if (!js) throw std::runtime_error("cannot open " + json_path + " for writing");
    js << doc.dump(2) << '\n';
    if (!js.good()) throw std::runtime_error("write failure on " + json_path);
  }
}

std::vector<SearchRecord> load_records(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot open " + json_path);
  json doc;
  in >> doc;
  std::vector<SearchRecord> records;
  for (const json& rec : doc) {
    SearchRecord r;
    r.a = parse_rational(rec.at("a").get<std::string>());
    r.c = parse_rational(rec.at("c").get<std::string>());
    r.density = Rational(rec.at("d_ac").at("num").get<long>(),
                         rec.at("d_ac").at("den").get<long>());
    r.density.canonicalize();
    for (const json& f : rec.at("half_fields")) {
      Rational d(f.at("density").at("num").get<long>(), f.at("density").at("den").get<long>());
      d.canonicalize();
      r.half_fields.push_back({f.at("d").get<long>(), d});
    }
    if (!rec.at("unique_half_field").is_null())
      r.unique_half_field = rec.at("unique_half_field").get<long>();
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace hyp
