#pragma once

#include <json.hpp>

#include "ztwo/characters.hpp"
#include "ztwo/cyclotomic.hpp"
#include "ztwo/lvalues.hpp"

namespace ztwo {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"level": n, "coeffs": [[num, den], ...]}, ascending powers of zeta.
/// Numerators and denominators are decimal strings so big integers survive.
Json to_json(const CyclotomicNumber& a);
CyclotomicNumber cyclotomic_from_json(const Json& j);

/// {"n": layer, "d": twist, "power": twist_power}
Json to_json(const CharSpec& spec);
CharSpec charspec_from_json(const Json& j);

Json to_json(const LValueResult& r);
LValueResult lvalue_from_json(const Json& j);

}  // namespace ztwo
