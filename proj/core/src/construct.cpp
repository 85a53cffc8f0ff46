#include "trigen/construct.hpp"

#include <algorithm>
#include <stdexcept>

namespace trigen {

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::SL2_NONCM: return "SL2_NONCM";
    case CaseTag::SL2_CM: return "SL2_CM";
    case CaseTag::SL2_CMPRIME: return "SL2_CMPRIME";
    case CaseTag::SU21: return "SU21";
    case CaseTag::SLN_MULTONE: return "SLN_MULTONE";
  }
  return "?";
}

CaseTag parse_case_tag(const std::string& text) {
  for (CaseTag t : {CaseTag::SL2_NONCM, CaseTag::SL2_CM, CaseTag::SL2_CMPRIME, CaseTag::SU21, CaseTag::SLN_MULTONE})
    if (to_string(t) == text) return t;
  throw std::invalid_argument("unknown case tag '" + text + "'");
}

const MatN& GeneratorTriple::get(const std::string& name) const {
  for (const auto& g : gens)
    if (g.name == name) return g.matrix;
  throw DomainError("triple has no generator '" + name + "'");
}

Alphabet GeneratorTriple::alphabet() const {
  Alphabet a;
  for (const auto& g : gens) a.add(g.name, g.matrix);
  return a;
}

MatN torus_sl2(const FieldElement& theta) { return MatN::diagonal({theta, theta.inverse()}); }

namespace {

MatN upper(const FieldPtr& k, const FieldElement& x) { return MatN::elementary(k, 2, 0, 1, x); }
MatN lower(const FieldPtr& k, const FieldElement& x) { return MatN::elementary(k, 2, 1, 0, x); }

void require_r(long r) {
  if (r < 1) throw DomainError("r must be a positive integer");
}

Integer to_integer(const Rational& q) {
  if (q.get_den() != 1) throw DomainError("expected an integral coordinate, got " + to_string(q));
  return q.get_num();
}

ZVector integer_coords(const FieldElement& a) {
  const QVector c = a.integral_coords();
  ZVector out;
  out.reserve(c.size());
  for (const auto& q : c) out.push_back(to_integer(q));
  return out;
}

std::string describe(const FieldPtr& k) {
  std::string s = k->name().empty() ? "field" : k->name();
  return s + " [" + k->canonical_key() + "]";
}

}  // namespace

GeneratorTriple build_noncm(const FieldPtr& field, const ThetaCertificate& theta_cert, long r) {
  require_r(r);
  const int n = field->degree();
  if (n == 1) throw DomainError("K = Q has no infinite-order units; the construction needs [K:Q] > 1");
  if (unit_rank(*field) < 1) throw DomainError("unit rank 0");
  const FieldElement& theta = theta_cert.theta;
  if (!theta.field() || !theta.field()->same_field(*field)) throw DomainError("theta does not lie in the field");
  if (!is_unit(theta) || is_root_of_unity(theta)) throw DomainError("theta is not a unit of infinite order");
  // In a CM field theta / conj(theta) is a root of unity, so a bounded power of
  // theta falls into the totally real subfield.
  const long bound = root_of_unity_order_bound(n);
  FieldElement p = theta;
  for (long k = 1; k <= bound; ++k, p *= theta)
    if (minimal_polynomial(p).degree() != n)
      throw DomainError("theta^" + std::to_string(k) + " generates a proper subfield; the field looks CM, use SL2_CM");

  const FieldPtr& k = field;
  GeneratorTriple t;
  t.case_tag = CaseTag::SL2_NONCM;
  t.r = r;
  t.gens = {{"U+", upper(k, k->from_rational(r))},
            {"U-", lower(k, k->from_rational(r))},
            {"H", torus_sl2(theta).pow(r)}};
  t.provenance["field"] = describe(k);
  t.provenance["theta"] = theta.to_string();
  return t;
}

GeneratorTriple build_cm(const SubfieldEmbedding& embedding, const FieldElement& alpha,
                         const ThetaCertificate& theta_cert, long r) {
  require_r(r);
  const FieldPtr& e = embedding.field();
  const FieldPtr& f = embedding.subfield();
  if (!is_cm_field(*e, *f, embedding.image())) throw DomainError("field is not a CM extension of the declared subfield");
  if (!alpha.field()->same_field(*e)) throw DomainError("alpha does not lie in E");
  if (!alpha.is_integral()) throw DomainError("alpha must be integral");
  const auto beta = embedding.preimage(-(alpha * alpha));
  if (!beta) throw DomainError("alpha^2 does not lie in F");
  if (beta->is_zero() || !totally_positive(*beta))
    throw DomainError("alpha^2 = " + (alpha * alpha).to_string() + " is not minus a totally positive element of F");
  const FieldElement& theta_f = theta_cert.theta;
  if (!theta_f.field()->same_field(*f)) throw DomainError("theta must be a unit of the subfield F");
  if (!is_unit(theta_f) || is_root_of_unity(theta_f)) throw DomainError("theta is not a unit of infinite order");
  const FieldElement theta = embedding.map(theta_f);

  GeneratorTriple t;
  t.case_tag = CaseTag::SL2_CM;
  t.r = r;
  t.gens = {{"H", torus_sl2(theta).pow(r)},
            {"U+", upper(e, e->from_rational(r))},
            {"U-", lower(e, alpha * Rational(r))}};
  t.provenance["field"] = describe(e);
  t.provenance["subfield"] = describe(f);
  t.provenance["embedding"] = embedding.image().to_string();
  t.provenance["alpha"] = alpha.to_string();
  t.provenance["beta"] = beta->to_string();
  t.provenance["theta"] = theta_f.to_string();
  t.subfield = embedding;
  return t;
}

std::vector<FieldElement> integral_basis_elements(const FieldPtr& field) {
  std::vector<FieldElement> out;
  const QMatrix& b = field->integral_basis();
  for (std::size_t i = 0; i < b.rows(); ++i) out.push_back(field->from_power_coords(b.row(i)));
  return out;
}

ElementaryCertificate elementary_words(const FieldElement& theta, const MatN& u_gen, long r,
                                       const std::vector<FieldElement>& targets, const ElementaryOptions& options) {
  require_r(r);
  const FieldPtr& k = theta.field();
  const int n = k->degree();
  if (u_gen.size() != 2 || !u_gen.field()->same_field(*k)) throw DomainError("u_gen must be 2x2 over theta's field");
  const bool up = options.orientation == Orientation::Upper;
  const FieldElement& e = up ? u_gen(0, 1) : u_gen(1, 0);
  if (u_gen != MatN::elementary(k, 2, up ? 0 : 1, up ? 1 : 0, e) || e.is_zero())
    throw DomainError("u_gen is not a nontrivial elementary matrix of the requested orientation");
  if (!is_unit(theta)) throw DomainError("theta is not a unit");
  const long m_max = options.m_max > 0 ? options.m_max : 4L * n;

  const FieldElement step = theta.pow(2 * r);
  const FieldElement step_inv = step.inverse();
  std::vector<long> ms;
  std::vector<ZVector> cols;
  auto add_term = [&](long m, const FieldElement& v) {
    ms.push_back(m);
    cols.push_back(integer_coords(v));
  };
  FieldElement pos = e;
  for (long m = 0; m < n && m < m_max; ++m, pos *= step) add_term(m, pos);
  std::optional<HermiteLattice> lat;
  lat.emplace(cols);
  FieldElement neg = e * step_inv;
  for (long m = -1; !lat->full_rank() && static_cast<long>(ms.size()) < m_max; --m, neg *= step_inv) {
    add_term(m, neg);
    lat.emplace(cols);
  }
  if (!lat->full_rank())
    throw DomainError("reachable lattice has rank " + std::to_string(lat->rank()) + " < " + std::to_string(n) +
                      " within " + std::to_string(m_max) + " powers");

  ElementaryCertificate cert;
  cert.orientation = options.orientation;
  cert.h_name = options.h_name;
  cert.u_name = options.u_name;
  cert.r = r;
  cert.m_values = ms;
  cert.N = lat->exponent();
  cert.lattice_index = lat->index();
  cert.lattice_basis = lat->basis();

  for (const auto& x : targets) {
    if (!x.field()->same_field(*k)) throw DomainError("target lies in another field");
    ElementaryTarget t;
    t.target = x;
    const ZVector v = integer_coords(x);
    const auto s = lat->scale_into(v);
    if (!s) throw std::logic_error("full-rank lattice failed to absorb a target");
    t.scale = *s;
    t.achieved = x * Rational(*s);
    ZVector sv = v;
    for (auto& c : sv) c *= *s;
    const auto coeffs = lat->express(sv);
    if (!coeffs) throw std::logic_error("scaled target not expressible in the lattice");
    std::vector<Letter> letters;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const Integer& c = (*coeffs)[i];
      if (c == 0) continue;
      if (!c.fits_slong_p()) throw CapExceeded("word exponent exceeds the machine range");
      t.terms.emplace_back(ms[i], c);
      const long m = ms[i];
      const long conj = up ? m : -m;
      if (conj != 0) letters.push_back({options.h_name, conj});
      letters.push_back({options.u_name, c.get_si()});
      if (conj != 0) letters.push_back({options.h_name, -conj});
    }
    t.word = Word(std::move(letters)).reduced();
    cert.targets.push_back(std::move(t));
  }
  return cert;
}

std::vector<bool> verify_elementary(const ElementaryCertificate& cert, const Alphabet& alphabet,
                                    const std::optional<SubfieldEmbedding>& embedding) {
  std::vector<bool> out;
  const bool up = cert.orientation == Orientation::Upper;
  for (const auto& t : cert.targets) {
    FieldElement x = t.achieved;
    if (embedding && x.field()->same_field(*embedding->subfield()) && !x.field()->same_field(*embedding->field()))
      x = embedding->map(x);
    const MatN got = word_eval(t.word, alphabet);
    if (!got.field()->same_field(*x.field())) {
      out.push_back(false);
      continue;
    }
    out.push_back(got == MatN::elementary(x.field(), 2, up ? 0 : 1, up ? 1 : 0, x));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::pair<FieldElement, FieldElement> relative_trace_norm(const SubfieldEmbedding& embedding, const FieldElement& x) {
  const FieldPtr& e = embedding.field();
  const FieldPtr& f = embedding.subfield();
  if (embedding.relative_degree() != 2) throw DomainError("relative trace/norm needs [E:F] = 2");
  if (!x.field()->same_field(*e)) throw DomainError("x does not lie in E");
  if (embedding.contains(x)) throw DomainError("x lies in F");
  // Solve x^2 = sum c_j f^j x - sum d_j f^j over Q.
  const auto m = static_cast<std::size_t>(f->degree());
  const auto dim = static_cast<std::size_t>(e->degree());
  QMatrix a(dim, 2 * m);
  FieldElement fj = e->one();
  for (std::size_t j = 0; j < m; ++j, fj *= embedding.image()) {
    const QVector u = (fj * x).coords();
    const QVector v = fj.coords();
    for (std::size_t i = 0; i < dim; ++i) {
      a(i, j) = u[i];
      a(i, m + j) = -v[i];
    }
  }
  const auto sol = a.solve((x * x).coords());
  if (!sol) throw std::logic_error("x has no relative quadratic relation");
  FieldElement t = f->zero(), nn = f->zero();
  FieldElement g = f->one();
  for (std::size_t j = 0; j < m; ++j, g *= f->generator()) {
    t += g * (*sol)[j];
    nn += g * (*sol)[m + j];
  }
  return {t, nn};
}

namespace {

Integer factorial(long n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

}  // namespace

CmPrimeElement cmprime_g_element(const SubfieldEmbedding& embedding, const FieldElement& x, const FieldElement& theta,
                                 std::optional<long> divisibility) {
  const FieldPtr& e = embedding.field();
  const FieldPtr& f = embedding.subfield();
  if (!x.field()->same_field(*e)) throw DomainError("x does not lie in E");
  if (!x.is_integral()) throw DomainError("x must be integral");
  if (divisibility) {
    if (*divisibility < 0) throw DomainError("divisibility parameter must be non-negative");
    if (!(x * Rational(1, factorial(*divisibility))).is_integral())
      throw DomainError("x is not divisible by " + std::to_string(*divisibility) + "!");
  }
  const auto [t_f, n_f] = relative_trace_norm(embedding, x);
  if (t_f.is_zero()) throw DomainError("relative trace t = 0; this case is the CM construction (use SL2_CM)");
  if (!theta.field()->same_field(*f)) throw DomainError("theta must lie in F");
  if (!is_unit(theta)) throw DomainError("theta is not a unit of F");
  if (theta.is_one()) throw DomainError("theta = 1 gives c = 0; choose a nontrivial unit");
  const FieldElement q_f = (theta - f->one()) / t_f;
  if (!q_f.is_integral()) throw DomainError("theta is not congruent to 1 mod t O_F");

  const FieldElement th = embedding.map(theta);
  const FieldElement t = embedding.map(t_f);
  const FieldElement nn = embedding.map(n_f);
  const FieldElement one = e->one();
  const MatN g = lower(e, -(x * th.inverse())) * upper(e, embedding.map(q_f)) * lower(e, x);

  CmPrimeElement out;
  out.g = g;
  out.a = g(0, 0);
  out.b = g(0, 1);
  out.c = g(1, 0);
  out.d = g(1, 1);
  out.t = t_f;
  out.n = n_f;
  out.theta = theta;
  out.formula_a = out.a == one + x * (th - one) / t;
  out.formula_c = out.c == nn * (one - th.inverse()) / t;
  out.a_outside_f = !embedding.contains(out.a);
  out.c_in_f = embedding.contains(out.c);
  if (out.c.is_zero()) throw DomainError("c = 0; the unit gives no usable Bruhat cell");
  return out;
}

FieldElement congruent_unit_power(const FieldElement& unit, const FieldElement& t, long k_max) {
  if (t.is_zero()) throw DomainError("modulus t must be nonzero");
  const FieldPtr& f = unit.field();
  const FieldElement tinv = t.inverse();
  FieldElement p = unit;
  for (long k = 1; k <= k_max; ++k, p *= unit)
    if (((p - f->one()) * tinv).is_integral() && !p.is_one()) return p;
  throw CapExceeded("no power of the unit up to " + std::to_string(k_max) + " is congruent to 1 mod t");
}

GeneratorTriple build_cmprime(const SubfieldEmbedding& embedding, const FieldElement& x, const FieldElement& theta,
                              long r) {
  require_r(r);
  const FieldPtr& e = embedding.field();
  if (!x.field()->same_field(*e) || !x.is_integral() || embedding.contains(x))
    throw DomainError("x must be an integral element of E outside F");
  if (!theta.field()->same_field(*embedding.subfield()) || !is_unit(theta) || is_root_of_unity(theta))
    throw DomainError("theta must be a unit of infinite order in F");
  GeneratorTriple t;
  t.case_tag = CaseTag::SL2_CMPRIME;
  t.r = r;
  t.gens = {{"U+", upper(e, e->from_rational(r))},
            {"U-", lower(e, x * Rational(r))},
            {"H", torus_sl2(embedding.map(theta)).pow(r)}};
  t.provenance["field"] = describe(e);
  t.provenance["subfield"] = describe(embedding.subfield());
  t.provenance["embedding"] = embedding.image().to_string();
  t.provenance["x"] = x.to_string();
  t.provenance["theta"] = theta.to_string();
  t.subfield = embedding;
  return t;
}

// ---------------------------------------------------------------------------

namespace {

using Vec = std::vector<FieldElement>;

Vec mat_vec(const MatN& g, const Vec& v) {
  Vec out(v.size(), g.field()->zero());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += g(i, j) * v[j];
  return out;
}

Vec vec_mat(const Vec& v, const MatN& g) {
  Vec out(v.size(), g.field()->zero());
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t i = 0; i < v.size(); ++i) out[j] += v[i] * g(i, j);
  return out;
}

FieldElement det_of_rows(const std::vector<Vec>& rows) {
  std::vector<std::vector<FieldElement>> r(rows.begin(), rows.end());
  return MatN::from_rows(r).det();
}

}  // namespace

MultoneResult build_sln_multone(std::size_t n, const MatN& levi_g, const std::vector<long>& exponents,
                                const std::vector<FieldElement>& u_col, long r) {
  require_r(r);
  if (n < 3) throw DomainError("SLN_MULTONE needs n >= 3");
  if (levi_g.size() != n - 1) throw DomainError("Levi block must be (n-1)x(n-1)");
  if (u_col.size() != n - 1) throw DomainError("u_col must have n-1 entries");
  if (exponents.size() != n - 1) throw DomainError("need n-1 wedge exponents");
  const FieldPtr& k = levi_g.field();
  const FieldElement delta = levi_g.det();
  if (delta.is_zero()) throw DomainError("Levi block is singular");
  if (!levi_g.is_integral() || !levi_g.inverse().is_integral())
    throw DomainError("Levi block must be integral with integral inverse");

  MatN m = MatN::identity(k, n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j + 1 < n; ++j) m(i, j) = levi_g(i, j);
  m(n - 1, n - 1) = delta.inverse();
  MatN u = MatN::identity(k, n);
  MatN ul = MatN::identity(k, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!u_col[i].field()->same_field(*k)) throw DomainError("u_col entries lie in another field");
    u(i, n - 1) = u_col[i] * Rational(r);
    ul(n - 1, i) = u_col[i] * Rational(r);
  }

  // Ad(m^k) scales the column block by delta^k g^k and the row block by delta^-k g^-k.
  WedgeReport w;
  w.exponents = exponents;
  std::vector<Vec> up, lo;
  for (long e : exponents) {
    up.push_back(mat_vec(levi_g.pow(e) * delta.pow(e), u_col));
    lo.push_back(vec_mat(u_col, levi_g.pow(-e) * delta.pow(-e)));
  }
  w.det_upper = det_of_rows(up);
  w.det_lower = det_of_rows(lo);
  if (w.det_upper.is_zero() || w.det_lower.is_zero())
    throw DomainError("wedge determinant vanishes (upper " + w.det_upper.to_string() + ", lower " +
                      w.det_lower.to_string() + "); perturb u_col or the exponents");

  MultoneResult out;
  out.triple.case_tag = CaseTag::SLN_MULTONE;
  out.triple.r = r;
  out.triple.gens = {{"M", m}, {"U+", u}, {"U-", ul}};
  out.triple.provenance["field"] = describe(k);
  out.triple.provenance["levi"] = levi_g.to_string();
  out.wedge = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------

FieldElement su21_norm_one_unit(const Su21Setting& setting) {
  const Rational zq = (setting.sqrt_z * setting.sqrt_z).rational_value();
  if (zq <= 0) throw DomainError("Q(sqrt z) with z < 0 has no unit of infinite order");
  const Integer z = zq.get_num();
  const FieldPtr e = NumberField::create({-z, 0, 1});
  FieldElement u = fundamental_unit_real_quadratic(*e);
  if (u.norm() == -1) u = u * u;
  return setting.in_e(u.coords()[0], u.coords()[1]);
}

namespace {

std::vector<FieldElement> e_box(const Su21Setting& setting, long h) {
  std::vector<FieldElement> out;
  const FieldElement w = setting.e_omega();
  const FieldElement one = setting.field->one();
  for (long a = -h; a <= h; ++a)
    for (long b = -h; b <= h; ++b) out.push_back(one * Rational(a) + w * Rational(b));
  return out;
}

}  // namespace

Su21Report su21_commutator_checks(const Su21Setting& setting, const FieldElement& t, long height) {
  Su21Report rep;
  rep.commutator_height = height;
  const FieldElement one = setting.field->one();
  const auto us = e_box(setting, height);
  // (B, B^-1) for every parameter pair.
  auto table = [&](const FieldElement& scale) {
    std::vector<std::pair<MatN, MatN>> out;
    for (long x = 1; x <= height; ++x)
      for (const auto& u : us)
        out.emplace_back(su21_uplus_generator(setting.data, UplusFamily::Full, scale, x, u),
                         su21_uplus_generator(setting.data, UplusFamily::Full, scale, -x, u));
    return out;
  };
  const auto at = table(t), a1 = table(one);
  for (const auto& [a, ai] : at)
    for (const auto& [b, bi] : a1) {
      const MatN c = a * b * ai * bi;
      ++rep.commutators_checked;
      if (!u2alpha_parameter(c, t, setting.sqrt_z)) ++rep.commutators_failed;
    }
  return rep;
}

Su21Build build_su21(const Su21Setting& setting, const FieldElement& t, long r, long commutator_height) {
  require_r(r);
  const FieldPtr& k = setting.field;
  if (!t.field()->same_field(*k)) throw DomainError("t must lie in the setting's field");
  if (t.is_zero() || !t.is_integral()) throw DomainError("t must be a nonzero integral element");
  const FieldElement theta = su21_norm_one_unit(setting);
  const MatN b = su21_uplus_generator(setting.data, UplusFamily::Full, k->one(), r, k->one());
  const MatN& h = setting.data.form_h;

  Su21Build out;
  out.triple.case_tag = CaseTag::SU21;
  out.triple.r = r;
  out.triple.gens = {{"H", su21_torus(theta).pow(r)},
                     {"U+", su21_uplus_generator(setting.data, UplusFamily::RootTwoAlpha, t, r, k->one())},
                     {"U-", h * b * h}};
  out.triple.provenance["field"] = describe(k);
  out.triple.provenance["sqrt_z"] = setting.sqrt_z.to_string();
  out.triple.provenance["t"] = t.to_string();
  out.triple.provenance["theta"] = theta.to_string();
  for (const auto& g : out.triple.gens)
    out.report.generator_checks.emplace_back(g.name, su21_check(g.matrix, setting.data));
  const Su21Report comm = su21_commutator_checks(setting, t, commutator_height);
  out.report.commutator_height = comm.commutator_height;
  out.report.commutators_checked = comm.commutators_checked;
  out.report.commutators_failed = comm.commutators_failed;
  return out;
}

}  // namespace trigen
