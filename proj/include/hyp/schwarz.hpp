#pragma once

#include "hyp/quadratic_density.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hyp {

struct SearchConfig {
  int max_height = 48;               // bound on the reduced denominators of a and c
  Rational threshold = Rational(1, 4);  // keep pairs with density strictly above
  std::string output_path;           // CSV destination; empty keeps results in memory
  std::string json_path;             // optional JSON sidecar
  int worker_count = 0;              // 0 = library default
};

struct AttainingField {
  long d = 0;  // squarefree field parameter
  Rational density;
  bool operator==(const AttainingField&) const = default;
};

struct SearchRecord {
  Rational a, c;
  Rational density;  // D(a;c): no splitting filter, modulus from the denominators
  std::vector<AttainingField> half_fields;  // candidates whose filtered density is 1/2
  std::optional<long> unique_half_field;
  bool operator==(const SearchRecord&) const = default;
};

// D(a;c) over M1 = lcm(denom a, denom c) (lcm(denom c, 2) when 2a is an
// integer), with the splitting condition dropped.
Rational pair_density(const Rational& a, const Rational& c);

// Squarefree D of both signs with |D| dividing lcm(denom a, denom c),
// excluding +1; the only fields that can attain the pair density.
std::vector<long> candidate_discriminants(const Rational& a, const Rational& c);

// Enumerates reduced a, c in (0,1) with denominators up to max_height,
// skipping the pair where both 2a and 2c are integers, and keeps pairs
// above the threshold. For half-density pairs every candidate field is
// tested and the attaining ones recorded. Output order is deterministic,
// (denom a, numer a, denom c, numer c) ascending; the parallel sweep fills
// a preallocated slot per pair, so worker count never changes the bytes.
std::vector<SearchRecord> sweep(const SearchConfig& config);
// Single-threaded reference implementation the parallel sweep is tested against.
std::vector<SearchRecord> sweep_serial(const SearchConfig& config);

// Hard invariants: density at most 1/2 when 2a, 2c are not both integers,
// and at most 1/4 for any candidate field whose discriminant is coprime to
// the pair modulus. A violation is an implementation bug and throws.
void bound_audit(const SearchRecord& record);

// CSV with header a,c,D_ac_num,D_ac_den,half_fields (fields ';'-joined),
// plus an optional JSON sidecar carrying the full records.
void persist(const std::vector<SearchRecord>& records, const std::string& csv_path,
             const std::string& json_path = "");
std::vector<SearchRecord> load_records(const std::string& json_path);

}  // namespace hyp
