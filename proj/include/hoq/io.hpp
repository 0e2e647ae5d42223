#pragma once

#include "hoq/choi_numeric.hpp"
#include "hoq/inverse_search.hpp"
#include "hoq/semantics.hpp"

#include <json.hpp>

#include <string>

namespace hoq::io {

using Json = nlohmann::ordered_json;

/// {"dims": [...], "matrix": [[[re, im], ...], ...]}, row-major.
Json to_json(const HermOp& op);
HermOp hermop_from_json(const Json& j, double herm_tol = kHermTol);

/// Sorted string list.
Json to_json(const StringSet& s);
/// Accepts a list of strings, or an object with "delta" (or "strings") and
/// optional "dims". With `length` the strings must have that length.
StringSet stringset_from_json(const Json& j, std::optional<std::size_t> length = std::nullopt);

Json to_json(const TypeSemantics& sem);
Json to_json(const MembershipReport& rep);
Json to_json(const FeasibilityReport& rep);
Json to_json(const SearchResult& res);
Json to_json(const Permutation& p);

/// Rationals serialise as "p/q"; integers that exceed 2^53 as strings.
Json integer_json(const Integer& v);

/// Reads and parses a JSON file; throws InvalidArgument with the path on failure.
Json read_json_file(const std::string& path);

}  // namespace hoq::io
