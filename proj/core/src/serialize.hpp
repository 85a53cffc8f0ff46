#pragma once

// JSON conversion for reports and caches. Exact values are written as decimal
// strings ("p/q" for rationals); field elements as power-basis coordinates.

#include <json.hpp>

#include "trigen/verify.hpp"

namespace trigen::json_io {

using nlohmann::json;

json rational(const Rational& q);
json integer(const Integer& z);
json element(const FieldElement& a);
json matrix(const MatN& m);
json word(const Word& w);
json theta(const ThetaCertificate& c);
json elementary(const ElementaryCertificate& c, const std::vector<bool>& checks);
json closure(const ClosureResult& c);
json prime(const PrimeReport& p);
json triple(const GeneratorTriple& t);

/// Accepts a decimal string, "p/q" or a JSON integer. Throws
/// std::invalid_argument for floats and other types.
Rational to_rational(const json& j);
Integer to_integer(const json& j);
long to_long(const json& j);
QVector to_qvector(const json& j);
ZVector to_zvector(const json& j);

ThetaCertificate theta_from(const json& j, const FieldPtr& field);

}  // namespace trigen::json_io
