#include "serialize.hpp"

#include <stdexcept>

namespace trigen::json_io {

json rational(const Rational& q) { return to_string(q); }
json integer(const Integer& z) { return to_string(z); }

json element(const FieldElement& a) {
  json out = json::array();
  for (const auto& c : a.coords()) out.push_back(rational(c));
  return out;
}

json matrix(const MatN& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(element(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json word(const Word& w) {
  json out = json::array();
  for (const auto& l : w.letters()) out.push_back(json::array({l.generator, l.exponent}));
  return out;
}

json theta(const ThetaCertificate& c) {
  json idx = json::array();
  for (const auto& [r, v] : c.indices) idx.push_back({{"r", r}, {"index", integer(v)}});
  json full = json::array();
  for (bool b : c.full_degree) full.push_back(b);
  return {{"theta", element(c.theta)},
          {"theta_display", c.theta.to_string()},
          {"r_checked", c.r_checked},
          {"indices", idx},
          {"full_degree", full}};
}

json elementary(const ElementaryCertificate& c, const std::vector<bool>& checks) {
  json targets = json::array();
  for (std::size_t i = 0; i < c.targets.size(); ++i) {
    const auto& t = c.targets[i];
    json terms = json::array();
    for (const auto& [m, n] : t.terms) terms.push_back(json::array({m, integer(n)}));
    json e = {{"target", element(t.target)}, {"scale", integer(t.scale)}, {"achieved", element(t.achieved)},
              {"terms", terms},           {"word", word(t.word)},       {"word_length", t.word.length()}};
    if (i < checks.size()) e["verified"] = static_cast<bool>(checks[i]);
    targets.push_back(std::move(e));
  }
  json basis = json::array();
  for (const auto& row : c.lattice_basis) {
    json r = json::array();
    for (const auto& v : row) r.push_back(integer(v));
    basis.push_back(std::move(r));
  }
  return {{"orientation", c.orientation == Orientation::Upper ? "E12" : "E21"},
          {"generators", {c.h_name, c.u_name}},
          {"r", c.r},
          {"m_values", c.m_values},
          {"N", integer(c.N)},
          {"lattice_index", integer(c.lattice_index)},
          {"lattice_basis", basis},
          {"targets", targets}};
}

json closure(const ClosureResult& c) {
  json out = {{"method", c.method == ClosureResult::Method::Bfs ? "bfs" : "factorwise"},
              {"subgroup_order", integer(c.subgroup_order)},
              {"ambient_order", integer(c.ambient_order)},
              {"index", c.index ? integer(*c.index) : json(nullptr)},
              {"surjective", to_string(c.surjective)},
              {"capped", c.capped},
              {"frontier_peak", c.frontier_peak},
              {"elements_visited", c.elements_visited}};
  if (!c.factors.empty()) {
    json f = json::array();
    for (const auto& x : c.factors) f.push_back(closure(x));
    out["factors"] = std::move(f);
  }
  return out;
}

json prime(const PrimeReport& p) {
  json out = {{"p", std::to_string(p.p)}};
  switch (p.status) {
    case PrimeReport::Status::Ok: out["status"] = "ok"; break;
    case PrimeReport::Status::Rejected: out["status"] = "rejected"; break;
    case PrimeReport::Status::Skipped: out["status"] = "skipped"; break;
  }
  if (!p.reason.empty()) out["reason"] = p.reason;
  if (!p.factor_degrees.empty()) out["factor_degrees"] = p.factor_degrees;
  if (p.ambient_method)
    out["ambient_method"] = *p.ambient_method == AmbientOrder::Method::Enumeration ? "enumeration" : "factorization";
  if (p.closure) out["closure"] = closure(*p.closure);
  return out;
}

json triple(const GeneratorTriple& t) {
  json gens = json::array();
  for (const auto& g : t.gens) gens.push_back({{"name", g.name}, {"matrix", matrix(g.matrix)}, {"display", g.matrix.to_string()}});
  json prov = json::object();
  for (const auto& [k, v] : t.provenance) prov[k] = v;
  return {{"case", to_string(t.case_tag)}, {"r", t.r}, {"generators", gens}, {"provenance", prov}};
}

Rational to_rational(const json& j) {
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("expected an exact number (decimal string or integer), got " + j.dump());
}

Integer to_integer(const json& j) {
  const Rational q = to_rational(j);
  if (q.get_den() != 1) throw std::invalid_argument("expected an integer, got " + j.dump());
  return q.get_num();
}

long to_long(const json& j) {
  const Integer z = to_integer(j);
  if (!z.fits_slong_p()) throw std::invalid_argument("integer out of range: " + j.dump());
  return z.get_si();
}

QVector to_qvector(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of exact numbers, got " + j.dump());
  QVector out;
  for (const auto& e : j) out.push_back(to_rational(e));
  return out;
}

ZVector to_zvector(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of integers, got " + j.dump());
  ZVector out;
  for (const auto& e : j) out.push_back(to_integer(e));
  return out;
}

ThetaCertificate theta_from(const json& j, const FieldPtr& field) {
  ThetaCertificate c;
  c.theta = field->from_power_coords(to_qvector(j.at("theta")));
  c.r_checked = j.at("r_checked").get<long>();
  for (const auto& e : j.at("indices")) c.indices.emplace_back(e.at("r").get<long>(), to_integer(e.at("index")));
  for (const auto& b : j.at("full_degree")) c.full_degree.push_back(b.get<bool>());
  return c;
}

}  // namespace trigen::json_io
