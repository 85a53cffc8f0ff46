#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trigen/linalg.hpp"
#include "trigen/poly.hpp"

namespace trigen {

class NumberField;
class FieldElement;
using FieldPtr = std::shared_ptr<const NumberField>;

struct Signature {
  int r1 = 0;  ///< real embeddings
  int r2 = 0;  ///< pairs of complex embeddings
  bool operator==(const Signature&) const = default;
};

/// How irreducibility of the defining polynomial was established.
enum class Irreducibility {
  Proven,   ///< exhaustive factor search (degree <= 4)
  Trusted,  ///< degree > 4: accepted as given and flagged
};

/// K = Q[x]/(f) together with an integral basis of the order used as O_K.
///
/// Elements are stored in the power basis 1, x, ..., x^(n-1). The integral
/// basis is a square rational matrix whose rows are the basis elements in
/// power-basis coordinates; its first row must represent 1 and it must contain
/// Z[x]. Instances are immutable and shared through FieldPtr.
class NumberField : public std::enable_shared_from_this<NumberField> {
 public:
  /// Validates and constructs a field. Throws DomainError for a non-monic or
  /// reducible f (degree <= 4), a singular or non-integral basis, or a basis
  /// that does not contain Z[x].
  static FieldPtr create(const ZVector& defining_poly, const std::optional<QMatrix>& integral_basis = std::nullopt,
                         std::string name = {});

  const std::string& name() const { return name_; }
  int degree() const { return degree_; }
  const ZVector& defining_coeffs() const { return coeffs_; }
  const QPoly& modulus() const { return modulus_; }
  const QMatrix& integral_basis() const { return basis_; }
  /// Converts power-basis row vectors to integral-basis coordinates.
  const QMatrix& basis_inverse() const { return basis_inv_; }
  Signature signature() const { return signature_; }
  Irreducibility irreducibility() const { return irreducibility_; }
  bool is_totally_real() const { return signature_.r2 == 0; }
  bool is_totally_imaginary() const { return signature_.r1 == 0; }

  /// Discriminant of the order spanned by the integral basis.
  const Integer& discriminant() const { return discriminant_; }
  /// Discriminant of f, i.e. of the order Z[x].
  const Integer& poly_discriminant() const { return poly_discriminant_; }
  /// [O : Z[x]] for the configured order O.
  const Integer& basis_index() const { return basis_index_; }

  /// Isolating intervals for the real roots of f, ascending.
  const std::vector<Interval>& real_root_intervals() const { return real_roots_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement generator() const;
  FieldElement from_rational(const Rational& q) const;
  FieldElement from_power_coords(QVector coords) const;
  FieldElement from_integral_coords(const QVector& coords) const;

  /// Stable textual identity used for hashing and equality across instances.
  std::string canonical_key() const;
  bool same_field(const NumberField& other) const;

 private:
  NumberField() = default;

  std::string name_;
  int degree_ = 0;
  ZVector coeffs_;
  QPoly modulus_;
  QMatrix basis_;
  QMatrix basis_inv_;
  Signature signature_;
  Irreducibility irreducibility_ = Irreducibility::Proven;
  Integer discriminant_;
  Integer poly_discriminant_;
  Integer basis_index_;
  std::vector<Interval> real_roots_;
};

/// An element of a number field with exact rational power-basis coordinates.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, QVector coords);

  const FieldPtr& field() const { return field_; }
  const QVector& coords() const { return coords_; }
  QPoly as_poly() const { return QPoly(coords_); }

  bool is_zero() const;
  bool is_one() const;
  /// Lies in Q (all non-constant coordinates vanish).
  bool is_rational() const;
  Rational rational_value() const;

  FieldElement operator+(const FieldElement& b) const;
  FieldElement operator-(const FieldElement& b) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& b) const;
  /// Throws DomainError on division by zero.
  FieldElement operator/(const FieldElement& b) const;
  FieldElement operator*(const Rational& c) const;
  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }
  bool operator==(const FieldElement& b) const;
  bool operator!=(const FieldElement& b) const { return !(*this == b); }

  FieldElement inverse() const;
  FieldElement pow(long e) const;

  /// Coordinates in the integral basis.
  QVector integral_coords() const;
  bool is_integral() const;

  /// Matrix of multiplication by this element acting on row vectors in the
  /// power basis.
  QMatrix multiplication_matrix() const;
  Rational norm() const;
  Rational trace() const;

  std::string to_string() const;

 private:
  void check_same_field(const FieldElement& b) const;

  FieldPtr field_;
  QVector coords_;
};

inline FieldElement operator*(const Rational& c, const FieldElement& a) { return a * c; }

/// Q presented as Q[x]/(x); shared instance.
FieldPtr rational_field();

/// Monic minimal polynomial over Q, found by linear dependency search among
/// 1, a, a^2, ...
QPoly minimal_polynomial(const FieldElement& a);

/// [O_K : Z[theta^r]] as an extended natural number.
class SubringIndex {
 public:
  static SubringIndex infinite() { return SubringIndex(); }
  static SubringIndex finite(Integer v) {
    SubringIndex s;
    s.value_ = std::move(v);
    return s;
  }
  bool is_finite() const { return value_.has_value(); }
  const Integer& value() const { return value_.value(); }
  std::string to_string() const { return value_ ? trigen::to_string(*value_) : "INFINITE"; }
  bool operator==(const SubringIndex&) const = default;

 private:
  SubringIndex() = default;
  std::optional<Integer> value_;
};

/// Index of Z[theta^r] in O_K via the determinant of the integral-basis
/// coordinates of 1, theta^r, ..., theta^((n-1)r). Throws DomainError when
/// theta is not integral or r < 1.
SubringIndex subring_index(const FieldElement& theta, long r);

/// Dirichlet rank r1 + r2 - 1.
int unit_rank(const NumberField& field);

/// True iff every real embedding of a is positive. The field must be totally
/// real and a nonzero (DomainError otherwise).
bool totally_positive(const FieldElement& a);

/// A subfield F of K presented by the image in K of F's generator.
class SubfieldEmbedding {
 public:
  /// Throws DomainError unless the image is a root of F's defining polynomial.
  SubfieldEmbedding(FieldPtr subfield, FieldPtr field, FieldElement image);

  const FieldPtr& subfield() const { return sub_; }
  const FieldPtr& field() const { return field_; }
  const FieldElement& image() const { return image_; }
  /// Relative degree [K : F].
  int relative_degree() const { return field_->degree() / sub_->degree(); }

  FieldElement map(const FieldElement& a) const;
  /// Preimage in F of an element of K, or nullopt when it is not in the image.
  std::optional<FieldElement> preimage(const FieldElement& a) const;
  bool contains(const FieldElement& a) const { return preimage(a).has_value(); }

 private:
  FieldPtr sub_;
  FieldPtr field_;
  FieldElement image_;
  QMatrix powers_;  // rows: power-basis coords of image^j, j < deg F
};

/// True iff `subfield` is totally real, `field` is totally imaginary and the
/// embedding element has the subfield's defining polynomial as minimal
/// polynomial. Throws DomainError if [field : subfield] != 2.
bool is_cm_field(const NumberField& field, const NumberField& subfield, const FieldElement& embedding);

}  // namespace trigen
