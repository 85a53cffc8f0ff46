#include "trigen/numberfield.hpp"

#include <sstream>

namespace trigen {

namespace {

std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  }
  return out;
}

// Exhaustive search for a rational root or, at degree 4, a monic integer
// quadratic factor. f is monic with integer coefficients.
bool has_small_factor(const QPoly& f) {
  const int n = f.degree();
  const Integer a0 = f.coeff(0).get_num();
  if (a0 == 0) return n > 1;
  for (const auto& d : divisors(a0)) {
    for (int s : {1, -1}) {
      if (f.eval(Rational(d * s)) == 0) return n > 1;
    }
  }
  if (n == 4) {
    Rational bq = cauchy_root_bound(f);
    Integer b = bq.get_num() / bq.get_den() + 1;
    for (const auto& c0 : divisors(a0)) {
      if (c0 > b * b) continue;
      for (int s : {1, -1}) {
        const Integer c = c0 * s;
        for (Integer lin = -2 * b; lin <= 2 * b; ++lin) {
          const QPoly q(QVector{Rational(c), Rational(lin), Rational(1)});
          if ((f % q).is_zero()) return true;
        }
      }
    }
  }
  return false;
}

Integer to_integer_checked(const Rational& q, const char* what) {
  if (q.get_den() != 1) throw DomainError(std::string(what) + " is not an integer");
  return q.get_num();
}

}  // namespace

FieldPtr NumberField::create(const ZVector& defining_poly, const std::optional<QMatrix>& integral_basis,
                             std::string name) {
  std::shared_ptr<NumberField> k(new NumberField());
  k->name_ = std::move(name);
  k->coeffs_ = defining_poly;
  while (!k->coeffs_.empty() && k->coeffs_.back() == 0) k->coeffs_.pop_back();
  k->modulus_ = QPoly::from_integers(k->coeffs_);
  if (k->modulus_.degree() < 1) throw DomainError("defining polynomial must have degree >= 1");
  if (k->modulus_.leading() != 1) throw DomainError("defining polynomial must be monic");
  const int n = k->degree_ = k->modulus_.degree();

  if (n <= 4) {
    if (has_small_factor(k->modulus_)) throw DomainError("defining polynomial " + k->modulus_.to_string() + " is reducible");
    k->irreducibility_ = Irreducibility::Proven;
  } else {
    k->irreducibility_ = Irreducibility::Trusted;
  }

  SturmSequence sturm(k->modulus_);
  k->signature_.r1 = sturm.count_real_roots();
  k->signature_.r2 = (n - k->signature_.r1) / 2;
  k->real_roots_ = isolate_real_roots(k->modulus_);

  const auto un = static_cast<std::size_t>(n);
  k->basis_ = integral_basis.value_or(QMatrix::identity(un));
  if (k->basis_.rows() != un || k->basis_.cols() != un) throw DomainError("integral basis must be n x n");
  if (k->basis_.det() == 0) throw DomainError("integral basis matrix is singular");
  for (std::size_t j = 0; j < un; ++j)
    if (k->basis_(0, j) != (j == 0 ? 1 : 0)) throw DomainError("first integral basis row must represent 1");
  k->basis_inv_ = k->basis_.inverse();

  const FieldPtr kp = k;
  for (std::size_t j = 0; j < un; ++j) {
    for (std::size_t i = 0; i < un; ++i)
      if (k->basis_inv_(j, i).get_den() != 1) throw DomainError("integral basis does not contain Z[x]");
    FieldElement w(kp, k->basis_.row(j));
    if (!minimal_polynomial(w).has_integer_coeffs()) throw DomainError("integral basis element " + w.to_string() + " is not integral");
  }

  // Trace forms: disc(order) = det(Tr(w_i w_j)).
  auto trace_form_det = [&](const QMatrix& rows) {
    std::vector<FieldElement> elems;
    for (std::size_t i = 0; i < un; ++i) elems.emplace_back(kp, rows.row(i));
    QMatrix t(un, un);
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = i; j < un; ++j) t(i, j) = t(j, i) = (elems[i] * elems[j]).trace();
    return t.det();
  };
  k->poly_discriminant_ = to_integer_checked(trace_form_det(QMatrix::identity(un)), "discriminant of f");
  k->discriminant_ = to_integer_checked(trace_form_det(k->basis_), "discriminant of the order");
  k->basis_index_ = to_integer_checked(abs(1 / k->basis_.det()), "basis index");
  return kp;
}

FieldElement NumberField::zero() const { return FieldElement(shared_from_this(), QVector(static_cast<std::size_t>(degree_))); }

FieldElement NumberField::one() const { return from_rational(1); }

FieldElement NumberField::generator() const {
  if (degree_ == 1) return from_rational(-Rational(coeffs_[0]));
  QVector v(static_cast<std::size_t>(degree_));
  v[1] = 1;
  return FieldElement(shared_from_this(), std::move(v));
}

FieldElement NumberField::from_rational(const Rational& q) const {
  QVector v(static_cast<std::size_t>(degree_));
  v[0] = q;
  return FieldElement(shared_from_this(), std::move(v));
}

FieldElement NumberField::from_power_coords(QVector coords) const {
  return FieldElement(shared_from_this(), std::move(coords));
}

FieldElement NumberField::from_integral_coords(const QVector& coords) const {
  if (coords.size() != static_cast<std::size_t>(degree_)) throw std::invalid_argument("coordinate vector has wrong length");
  return FieldElement(shared_from_this(), coords * basis_);
}

std::string NumberField::canonical_key() const {
  std::ostringstream os;
  os << "f=";
  for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i].get_str();
  os << ";B=";
  for (std::size_t i = 0; i < basis_.rows(); ++i)
    for (std::size_t j = 0; j < basis_.cols(); ++j) os << (i + j ? "," : "") << basis_(i, j).get_str();
  return os.str();
}

bool NumberField::same_field(const NumberField& other) const {
  return this == &other || coeffs_ == other.coeffs_;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(FieldPtr field, QVector coords) : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw std::invalid_argument("field element without parent field");
  const auto n = static_cast<std::size_t>(field_->degree());
  if (coords_.size() > n) {
    coords_ = (QPoly(std::move(coords_)) % field_->modulus()).coeffs();
  }
  coords_.resize(n);
}

void FieldElement::check_same_field(const FieldElement& b) const {
  if (!field_ || !b.field_ || !field_->same_field(*b.field_)) throw DomainError("field elements have different parents");
}

bool FieldElement::is_zero() const { return trigen::is_zero(coords_); }

bool FieldElement::is_one() const {
  if (coords_.empty() || coords_[0] != 1) return false;
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  for (std::size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return false;
  return true;
}

Rational FieldElement::rational_value() const {
  if (!is_rational()) throw DomainError("element " + to_string() + " is not rational");
  return coords_.empty() ? Rational(0) : coords_[0];
}

FieldElement FieldElement::operator+(const FieldElement& b) const {
  check_same_field(b);
  QVector r(coords_);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.coords_[i];
  return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& b) const {
  check_same_field(b);
  QVector r(coords_);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b.coords_[i];
  return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-() const {
  QVector r(coords_);
  for (auto& c : r) c = -c;
  return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator*(const FieldElement& b) const {
  check_same_field(b);
  if (b.is_rational()) return *this * b.coords_[0];
  if (is_rational()) return b * coords_[0];
  QPoly prod = as_poly() * b.as_poly();
  return FieldElement(field_, (prod % field_->modulus()).coeffs());
}

FieldElement FieldElement::operator*(const Rational& c) const {
  QVector r(coords_);
  for (auto& x : r) x *= c;
  return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator/(const FieldElement& b) const {
  check_same_field(b);
  return *this * b.inverse();
}

bool FieldElement::operator==(const FieldElement& b) const {
  check_same_field(b);
  return coords_ == b.coords_;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw DomainError("division by zero in number field");
  const XGcd e = xgcd(as_poly(), field_->modulus());
  // f irreducible, so gcd is 1 and s * a = 1 mod f.
  if (e.g.degree() != 0) throw DomainError("element is a zero divisor; defining polynomial is reducible");
  return FieldElement(field_, (e.s % field_->modulus()).coeffs());
}

FieldElement FieldElement::pow(long e) const {
  FieldElement base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
  FieldElement acc = field_->one();
  while (k) {
    if (k & 1) acc *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return acc;
}

QVector FieldElement::integral_coords() const { return coords_ * field_->basis_inverse(); }

bool FieldElement::is_integral() const { return trigen::is_integral(integral_coords()); }

QMatrix FieldElement::multiplication_matrix() const {
  const auto n = static_cast<std::size_t>(field_->degree());
  QMatrix m(n, n);
  FieldElement xi = field_->one();
  for (std::size_t i = 0; i < n; ++i) {
    const FieldElement prod = xi * *this;
    for (std::size_t j = 0; j < n; ++j) m(i, j) = prod.coords_[j];
    if (n > 1) xi = FieldElement(field_, (xi.as_poly() * QPoly::x() % field_->modulus()).coeffs());
  }
  return m;
}

Rational FieldElement::norm() const { return multiplication_matrix().det(); }

Rational FieldElement::trace() const {
  const QMatrix m = multiplication_matrix();
  Rational t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

std::string FieldElement::to_string() const { return as_poly().to_string(); }

// ---------------------------------------------------------------------------

FieldPtr rational_field() {
  static const FieldPtr q = NumberField::create({0, 1}, std::nullopt, "Q");
  return q;
}

QPoly minimal_polynomial(const FieldElement& a) {
  const FieldPtr& k = a.field();
  const auto n = static_cast<std::size_t>(k->degree());
  std::vector<QVector> powers{k->one().coords()};
  FieldElement p = k->one();
  for (std::size_t d = 1; d <= n; ++d) {
    p *= a;
    QMatrix cols(n, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < n; ++i) cols(i, j) = powers[j][i];
    if (auto sol = cols.solve(p.coords())) {
      QVector c(d + 1);
      for (std::size_t j = 0; j < d; ++j) c[j] = -(*sol)[j];
      c[d] = 1;
      return QPoly(std::move(c));
    }
    powers.push_back(p.coords());
  }
  throw std::logic_error("no linear dependency among powers; degree bound violated");
}

SubringIndex subring_index(const FieldElement& theta, long r) {
  if (r < 1) throw DomainError("subring_index needs r >= 1");
  if (!theta.is_integral()) throw DomainError("theta " + theta.to_string() + " is not integral");
  const FieldPtr& k = theta.field();
  const auto n = static_cast<std::size_t>(k->degree());
  const FieldElement step = theta.pow(r);
  FieldElement cur = k->one();
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const QVector c = cur.integral_coords();
    for (std::size_t j = 0; j < n; ++j) m(i, j) = c[j];
    cur *= step;
  }
  const Rational d = m.det();
  if (d == 0) return SubringIndex::infinite();
  return SubringIndex::finite(Rational(abs(d)).get_num());
}

int unit_rank(const NumberField& field) { return field.signature().r1 + field.signature().r2 - 1; }

bool totally_positive(const FieldElement& a) {
  const NumberField& k = *a.field();
  if (!k.is_totally_real()) throw DomainError("totally_positive needs a totally real field");
  if (a.is_zero()) throw DomainError("totally_positive of zero");
  const QPoly p = a.as_poly();
  for (Interval iv : k.real_root_intervals()) {
    while (true) {
      const Interval v = eval_interval(p, iv);
      if (v.lo > 0) break;
      if (v.hi < 0) return false;
      // a(root) != 0 because f is irreducible and a != 0, so refinement ends.
      iv = refine_root(k.modulus(), iv);
    }
  }
  return true;
}

SubfieldEmbedding::SubfieldEmbedding(FieldPtr subfield, FieldPtr field, FieldElement image)
    : sub_(std::move(subfield)), field_(std::move(field)), image_(std::move(image)) {
  if (!image_.field()->same_field(*field_)) throw DomainError("embedding image does not lie in the ambient field");
  if (field_->degree() % sub_->degree() != 0) throw DomainError("subfield degree does not divide field degree");
  FieldElement acc = field_->zero();
  const auto& c = sub_->defining_coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * image_ + field_->from_rational(Rational(c[i]));
  if (!acc.is_zero()) throw DomainError("embedding image is not a root of the subfield's defining polynomial");
  const auto m = static_cast<std::size_t>(sub_->degree());
  const auto n = static_cast<std::size_t>(field_->degree());
  powers_ = QMatrix(m, n);
  FieldElement p = field_->one();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) powers_(j, i) = p.coords()[i];
    p *= image_;
  }
}

FieldElement SubfieldEmbedding::map(const FieldElement& a) const {
  if (!a.field()->same_field(*sub_)) throw DomainError("element is not in the subfield");
  return FieldElement(field_, a.coords() * powers_);
}

std::optional<FieldElement> SubfieldEmbedding::preimage(const FieldElement& a) const {
  if (!a.field()->same_field(*field_)) throw DomainError("element is not in the ambient field");
  auto sol = powers_.transpose().solve(a.coords());
  if (!sol) return std::nullopt;
  return sub_->from_power_coords(std::move(*sol));
}

bool is_cm_field(const NumberField& field, const NumberField& subfield, const FieldElement& embedding) {
  if (field.degree() != 2 * subfield.degree())
    throw DomainError("CM test needs [field : subfield] = 2, got degrees " + std::to_string(field.degree()) + " and " +
                      std::to_string(subfield.degree()));
  if (!embedding.field()->same_field(field)) throw DomainError("embedding element is not in the field");
  if (!subfield.is_totally_real() || !field.is_totally_imaginary()) return false;
  return minimal_polynomial(embedding) == subfield.modulus();
}

}  // namespace trigen
