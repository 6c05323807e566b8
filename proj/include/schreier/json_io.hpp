#pragma once

#include <string>

#include <json.hpp>

#include "schreier/family.hpp"
#include "schreier/measure.hpp"
#include "schreier/norm.hpp"
#include "schreier/weaknull.hpp"

namespace schreier {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Inline JSON, or "@path" to read a file.
Json load_json(const std::string& text_or_path);

Rational rational_from_json(const Json& j);
Ordinal ordinal_from_json(const Json& j);
FinSet finset_from_json(const Json& j);
LazySet lazyset_from_json(const Json& j, std::size_t probe_limit = kDefaultProbeLimit);
Family family_from_json(const Json& j, std::size_t probe_limit = kDefaultProbeLimit);
NormEngine engine_from_json(const Json& j);
// Node paths are resolved against the tree of a tree engine.
SparseVector vector_from_json(const Json& j, const NormEngine* engine = nullptr);
// {"vectors": [...]}, a bare array, or "basis:N".
Instance instance_from_json(const NormEngine& engine, const Json& j);

Json to_json(const Rational& q);
Json to_json(const FinSet& e);
Json to_json(const Measure& m);
Json to_json(const SparseVector& x, const NormEngine* engine = nullptr);
Json to_json(const NormResult& r, const NormEngine& engine);
Json to_json(const CertReport& r);
Json to_json(const NullReport& r);
Json to_json(const DichotomyResult& r);
// Decimal rendering used for approximate values.
std::string decimal(long double v);

}  // namespace schreier
