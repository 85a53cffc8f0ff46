#include "trigen/units.hpp"

#include <string>

namespace trigen {

bool is_unit(const FieldElement& a) {
  if (a.is_zero() || !a.is_integral()) return false;
  const Rational n = a.norm();
  return n == 1 || n == -1;
}

long root_of_unity_order_bound(int degree) { return std::max<long>(24, 2L * degree * degree); }

bool is_root_of_unity(const FieldElement& a) {
  if (a.is_zero()) return false;
  FieldElement p = a;
  const long bound = root_of_unity_order_bound(a.field()->degree());
  for (long k = 1; k <= bound; ++k) {
    if (p.is_one()) return true;
    p *= a;
  }
  return false;
}

namespace {

Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Integer fdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

FieldElement fundamental_unit_real_quadratic(const NumberField& field) {
  if (field.degree() != 2 || field.signature().r1 != 2)
    throw DomainError("fundamental_unit_real_quadratic needs a real quadratic field");
  const FieldElement one = field.one();
  const FieldElement w = field.from_power_coords(field.integral_basis().row(1));
  const QPoly mp = minimal_polynomial(w);
  // w^2 - T w + N = 0
  const Integer trace = -Rational(mp.coeff(1)).get_num();
  const Integer nrm = mp.coeff(0).get_num();
  const Integer disc = trace * trace - 4 * nrm;
  const Integer s = isqrt(disc);
  if (s * s == disc) throw DomainError("order discriminant is a square; field is not quadratic");

  // Convergents p/q of -conj(w) = (-T + sqrt D)/2 give the units p + q w.
  Integer pk = -trace, qk = 2;
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  constexpr long kMaxSteps = 2'000'000;
  for (long step = 0; step < kMaxSteps; ++step) {
    const Integer a = qk > 0 ? fdiv(pk + s, qk) : fdiv(pk + s + 1, qk);
    const Integer p = a * p_prev + p_prev2;
    const Integer q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    if (q >= 1) {
      const Integer n = p * p + p * q * trace + q * q * nrm;
      if (n == 1 || n == -1) return one * Rational(p) + w * Rational(q);
    }
    const Integer pn = a * qk - pk;
    const Integer qn = (disc - pn * pn) / qk;
    pk = pn;
    qk = qn;
  }
  throw DomainError("continued fraction period not found within step limit");
}

std::vector<FieldElement> collect_units(const NumberField& field, const UnitSource& source) {
  std::vector<FieldElement> out;
  switch (source.mode) {
    case UnitSource::Mode::Pell:
      out.push_back(fundamental_unit_real_quadratic(field));
      break;
    case UnitSource::Mode::Configured:
      for (const auto& c : source.units) {
        FieldElement u = field.from_integral_coords(c);
        if (!is_unit(u)) throw DomainError("configured element " + u.to_string() + " is not a unit");
        out.push_back(std::move(u));
      }
      break;
    case UnitSource::Mode::Search: {
      if (source.height_bound < 1) throw DomainError("search height bound must be positive");
      const auto n = static_cast<std::size_t>(field.degree());
      const long h = source.height_bound;
      std::vector<long> c(n, -h);
      while (true) {
        QVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = c[i];
        FieldElement u = field.from_integral_coords(v);
        if (is_unit(u)) out.push_back(std::move(u));
        std::size_t i = n;
        while (i-- > 0) {
          if (c[i] < h) {
            ++c[i];
            break;
          }
          c[i] = -h;
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
      break;
    }
  }
  return out;
}

ThetaCertificate select_theta(const NumberField& field, const UnitSource& source, long r_max) {
  if (r_max < 1) throw DomainError("r_max must be >= 1");
  const auto units = collect_units(field, source);
  const int n = field.degree();
  bool saw_infinite_order = false;
  for (const auto& u : units) {
    if (is_root_of_unity(u)) continue;
    saw_infinite_order = true;
    ThetaCertificate cert;
    cert.theta = u;
    cert.r_checked = r_max;
    bool ok = true;
    for (long r = 1; r <= r_max && ok; ++r) {
      const bool full = minimal_polynomial(u.pow(r)).degree() == n;
      cert.full_degree.push_back(full);
      const SubringIndex idx = subring_index(u, r);
      if (!full || !idx.is_finite()) {
        ok = false;
        break;
      }
      cert.indices.emplace_back(r, idx.value());
    }
    if (ok) return cert;
  }
  if (!saw_infinite_order) throw DomainError("no infinite-order unit available (unit rank " + std::to_string(unit_rank(field)) + ")");
  throw DomainError("no candidate unit generates Z[theta^r] of finite index for all r <= " + std::to_string(r_max) +
                    "; enlarge the unit source or check the field is not CM");
}

ThetaCertificate select_theta_cm(const SubfieldEmbedding& embedding, const UnitSource& subfield_source, long r_max) {
  if (!is_cm_field(*embedding.field(), *embedding.subfield(), embedding.image()))
    throw DomainError("field is not a CM extension of the declared subfield");
  return select_theta(*embedding.subfield(), subfield_source, r_max);
}

bool check_eq_card(const NumberField& field_e, const NumberField& subfield_f, const PlaceData& places) {
  if (field_e.degree() % subfield_f.degree() != 0) throw DomainError("[E:F] is not an integer");
  const int d = field_e.degree() / subfield_f.degree();
  if (static_cast<int>(places.real_places.size()) != subfield_f.signature().r1 ||
      places.complex_places != subfield_f.signature().r2)
    throw DomainError("place data does not match the signature of F");
  long lhs = static_cast<long>(places.real_places.size()) + places.complex_places;
  long rhs = static_cast<long>(places.complex_places) * d;
  long real_above = 0, complex_above = static_cast<long>(places.complex_places) * d;
  for (const auto& [x, y] : places.real_places) {
    if (x < 0 || y < 0 || x + 2 * y != d) throw DomainError("inconsistent place data: x(a) + 2 y(a) != [E:F]");
    rhs += x + y;
    real_above += x;
    complex_above += y;
  }
  if (real_above != field_e.signature().r1 || complex_above != field_e.signature().r2)
    throw DomainError("place data does not match the signature of E");
  return lhs == rhs;
}

}  // namespace trigen
