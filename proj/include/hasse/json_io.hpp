#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hasse/generator.hpp"
#include "hasse/invariants.hpp"

namespace hasse {

using Json = nlohmann::json;

// Every reader throws Error(Parse) on malformed input: wrong shapes, missing
// keys, coefficients outside [0, modulus).  Nothing is reduced silently, so
// write(read(x)) == x byte for byte.

Json to_json(const RingSpec& spec);
RingSpec ring_spec_from_json(const Json& j);

Json to_json(const Params& params);
/// Reads {p, f, e, h1, d1} and uses the standard ring spec.
Params params_from_json(const Json& j);

/// e lists of f integers, pi-adic digit first, each least significant first.
Json to_json(const ChainRing& ring, const RingElement& a);
RingElement element_from_json(const ChainRing& ring, const Json& j);

/// Row-major list of rows.
Json to_json(const ChainRing& ring, const Matrix& m);
Matrix matrix_from_json(const ChainRing& ring, const Json& j, std::size_t rows, std::size_t cols);

/// Field element as f integers, least significant first.
Json field_to_json(const FiniteField& K, Elem a);
Elem field_from_json(const FiniteField& K, const Json& j);

/// {label, seed, index, params, rings, F, V, pr_flags, lifted}.  When lifted,
/// F and V hold the matrices over W^ and the mod-p datum is their reduction;
/// pr_flags are the normalized generator matrices over R.
Json to_json(const Instance& inst);
/// Shapes are checked; the axioms are not (that is validate's job).
Instance instance_from_json(const Json& j);

/// {name, i, j, scalar, vanished, dual_scalar, iso, equal, natural_agrees, applicable, detail}.
Json to_json(const FiniteField& K, const DualityVerdict& v);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);
/// Throws Parse with the library message on syntax errors.
Json parse_json(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const CsvTable&) const = default;
};

/// RFC 4180: CRLF line ends; fields holding a comma, quote, CR or LF are
/// quoted with doubled inner quotes.
std::string write_csv(const CsvTable& table);
/// Accepts CRLF or LF.  Every row must have as many fields as the header.
CsvTable read_csv(const std::string& text);

/// Flattens an array of objects sharing the given keys.  Non-string values
/// are written as compact JSON.
CsvTable json_rows_to_csv(const Json& rows, const std::vector<std::string>& keys);

}  // namespace hasse
