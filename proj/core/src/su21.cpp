#include "trigen/su21.hpp"

namespace trigen {

FieldAutomorphism::FieldAutomorphism(FieldPtr field, FieldElement generator_image)
    : field_(std::move(field)), image_(std::move(generator_image)) {
  if (!image_.field()->same_field(*field_)) throw DomainError("automorphism image lies in another field");
  FieldElement acc = field_->zero();
  const auto& c = field_->defining_coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * image_ + field_->from_rational(Rational(c[i]));
  if (!acc.is_zero()) throw DomainError("generator image is not a root of the defining polynomial");
}

FieldAutomorphism FieldAutomorphism::quadratic_conjugation(const FieldPtr& field) {
  if (field->degree() != 2) throw DomainError("quadratic conjugation needs a quadratic field");
  // x + x' = -b for f = x^2 + b x + c.
  const FieldElement x = field->generator();
  return FieldAutomorphism(field, -x - field->from_rational(Rational(field->defining_coeffs()[1])));
}

FieldElement FieldAutomorphism::operator()(const FieldElement& a) const {
  if (!a.field()->same_field(*field_)) throw DomainError("automorphism applied to an element of another field");
  FieldElement acc = field_->zero();
  const auto& c = a.coords();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * image_ + field_->from_rational(c[i]);
  return acc;
}

bool FieldAutomorphism::is_involution() const { return (*this)(image_) == field_->generator(); }

FieldElement Su21Setting::in_e(const Rational& a, const Rational& b) const {
  return field->from_rational(a) + sqrt_z * b;
}

FieldElement Su21Setting::in_f(const Rational& a, const Rational& b) const {
  if (!sqrt_s) throw DomainError("setting has no imaginary quadratic parameter field");
  return field->from_rational(a) + *sqrt_s * b;
}

FieldElement Su21Setting::e_omega() const {
  const Rational z = (sqrt_z * sqrt_z).rational_value();
  const Integer zi = z.get_num();
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), zi.get_mpz_t(), 4);
  if (r == 1) {
    const FieldElement w = in_e(Rational(1, 2), Rational(1, 2));
    if (w.is_integral()) return w;
  }
  return sqrt_z;
}

namespace {

bool is_square(const Integer& v) {
  if (v < 0) return false;
  return mpz_perfect_square_p(v.get_mpz_t()) != 0;
}

}  // namespace

Su21Setting make_su21_setting(const Integer& z, const std::optional<Integer>& s) {
  if (is_square(z)) throw DomainError("z must not be a square");
  if (!s) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), 4);
    std::optional<QMatrix> basis;
    if (r == 1) basis = QMatrix::from_rows({{1, 0}, {Rational(1, 2), Rational(1, 2)}});
    FieldPtr e = NumberField::create({-z, 0, 1}, basis, "Q(sqrt " + z.get_str() + ")");
    const FieldElement root = e->generator();
    auto conj = FieldAutomorphism::quadratic_conjugation(e);
    MatN h = MatN::from_rationals(e, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    return Su21Setting{e, root, std::nullopt, HermitianData{h, conj, root}};
  }
  if (is_square(*s) || is_square(z * *s) || z == *s) throw DomainError("z, s and z*s must be non-squares");
  // y = sqrt z + sqrt s has minimal polynomial x^4 - 2(z+s) x^2 + (z-s)^2.
  const Integer zs = z - *s;
  FieldPtr l = NumberField::create({zs * zs, 0, -2 * (z + *s), 0, 1}, std::nullopt,
                                   "Q(sqrt " + z.get_str() + ", sqrt " + s->get_str() + ")");
  const FieldElement y = l->generator();
  // y^3 = (z + 3s) sqrt z + (3z + s) sqrt s, hence sqrt z = (y^3 - (3z+s) y) / (2 (s - z)).
  Rational scale(1, 2 * (*s - z));
  scale.canonicalize();
  const FieldElement rz = (y.pow(3) - y * Rational(3 * z + *s)) * scale;
  const FieldElement rs = y - rz;
  if (rz * rz != l->from_rational(Rational(z)) || rs * rs != l->from_rational(Rational(*s)))
    throw std::logic_error("square root extraction in biquadratic field failed");
  // Use the order Z[sqrt z, sqrt s] so that both square roots are integral.
  const QMatrix basis = QMatrix::from_rows({l->one().coords(), rz.coords(), rs.coords(), (rz * rs).coords()});
  l = NumberField::create(l->defining_coeffs(), basis, l->name());
  const FieldElement sz = l->from_power_coords(rz.coords());
  const FieldElement ss = l->from_power_coords(rs.coords());
  FieldAutomorphism conj(l, ss - sz);
  MatN h = MatN::from_rationals(l, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  return Su21Setting{l, sz, ss, HermitianData{h, conj, sz}};
}

MatN conjugate_transpose(const MatN& g, const FieldAutomorphism& conj) {
  MatN out(g.field(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) out(j, i) = conj(g(i, j));
  return out;
}

bool su21_check(const MatN& g, const HermitianData& data) {
  if (g.size() != 3) return false;
  if (!g.det().is_one()) return false;
  return conjugate_transpose(g, data.conjugation) * data.form_h * g == data.form_h;
}

MatN su21_uplus_generator(const HermitianData& data, UplusFamily family, const FieldElement& t, long x,
                          const FieldElement& u) {
  const FieldAutomorphism& conj = data.conjugation;
  if (conj(t) != t) throw DomainError("t must be fixed by the hermitian conjugation");
  const FieldPtr& k = t.field();
  MatN g = MatN::identity(k, 3);
  const Rational xq(x);
  if (family == UplusFamily::RootTwoAlpha) {
    g(0, 2) = t * data.sqrt_z * xq;
    return g;
  }
  if (!u.is_integral()) throw DomainError("u must be integral");
  const FieldElement ubar = conj(u);
  g(0, 1) = t * u * xq;
  g(0, 2) = -(t * t * u * ubar) * (xq * xq / 2);
  g(1, 2) = -(t * ubar) * xq;
  return g;
}

MatN su21_torus(const FieldElement& theta) {
  return MatN::diagonal({theta, theta.pow(-2), theta});
}

MatN sl2_to_su21(const MatN& g, const FieldElement& sqrt_z) {
  if (g.size() != 2) throw DomainError("sl2_to_su21 needs a 2x2 matrix");
  if (!g.det().is_one()) throw DomainError("sl2_to_su21 needs det = 1");
  const FieldPtr& k = g.field();
  MatN out(k, 3);
  out(0, 0) = g(0, 0);
  out(0, 2) = g(0, 1) * sqrt_z;
  out(1, 1) = k->one();
  out(2, 0) = g(1, 0) / sqrt_z;
  out(2, 2) = g(1, 1);
  return out;
}

std::optional<Integer> u2alpha_parameter(const MatN& g, const FieldElement& t, const FieldElement& sqrt_z) {
  if (g.size() != 3) return std::nullopt;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == 0 && j == 2) continue;
      const FieldElement& e = g(i, j);
      if (i == j ? !e.is_one() : !e.is_zero()) return std::nullopt;
    }
  const FieldElement k = g(0, 2) / (t * sqrt_z);
  if (!k.is_rational()) return std::nullopt;
  const Rational kv = k.rational_value();
  if (kv.get_den() != 1) return std::nullopt;
  return kv.get_num();
}

}  // namespace trigen
