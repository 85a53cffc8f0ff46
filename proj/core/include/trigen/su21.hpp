#pragma once

#include <optional>

#include "trigen/matgroup.hpp"

namespace trigen {

/// Field automorphism determined by the image of the power-basis generator.
class FieldAutomorphism {
 public:
  /// Throws DomainError unless the image is a root of the defining polynomial.
  FieldAutomorphism(FieldPtr field, FieldElement generator_image);
  /// The nontrivial automorphism of a quadratic field.
  static FieldAutomorphism quadratic_conjugation(const FieldPtr& field);

  const FieldPtr& field() const { return field_; }
  FieldElement operator()(const FieldElement& a) const;
  bool is_involution() const;

 private:
  FieldPtr field_;
  FieldElement image_;
};

/// The anti-diagonal hermitian form on E^3 and the conjugation it is
/// hermitian for. sqrt_z spans the -1 eigenspace of the conjugation on E.
struct HermitianData {
  MatN form_h;
  FieldAutomorphism conjugation;
  FieldElement sqrt_z;
};

/// Builds the hermitian setting for E = Q(sqrt z). With s given, entries live
/// in L = Q(sqrt z, sqrt s) (needed for parameters t from F = Q(sqrt s)) and
/// the conjugation negates sqrt z while fixing sqrt s.
struct Su21Setting {
  FieldPtr field;
  FieldElement sqrt_z;
  std::optional<FieldElement> sqrt_s;
  HermitianData data;

  /// a + b sqrt z.
  FieldElement in_e(const Rational& a, const Rational& b) const;
  /// a + b sqrt s (requires s).
  FieldElement in_f(const Rational& a, const Rational& b) const;
  /// Integral basis {1, w} of O_E with w = (1 + sqrt z)/2 when z = 1 mod 4, else sqrt z.
  FieldElement e_omega() const;
};

/// z must be a non-square integer; s (if given) a non-square with z s non-square.
Su21Setting make_su21_setting(const Integer& z, const std::optional<Integer>& s = std::nullopt);

MatN conjugate_transpose(const MatN& g, const FieldAutomorphism& conj);

/// conj-transpose(g) h g == h and det g == 1.
bool su21_check(const MatN& g, const HermitianData& data);

enum class UplusFamily {
  RootTwoAlpha,  ///< [[1,0,t x sqrt z],[0,1,0],[0,0,1]]
  Full,          ///< [[1, t u x, -t^2 x^2 u conj(u)/2],[0,1,-t conj(u) x],[0,0,1]]
};

/// Generator of U+(tZ). t must be fixed by the conjugation; u (Full family)
/// must be integral. x = 0 yields the identity.
MatN su21_uplus_generator(const HermitianData& data, UplusFamily family, const FieldElement& t, long x,
                          const FieldElement& u);

/// diag(theta, theta^-2, theta).
MatN su21_torus(const FieldElement& theta);

/// [[a,b],[c,d]] -> [[a,0,b sqrt z],[0,1,0],[c/sqrt z,0,d]].
MatN sl2_to_su21(const MatN& g, const FieldElement& sqrt_z);

/// If g = I + w E_13 with w = t k sqrt z for a rational integer k, returns k.
std::optional<Integer> u2alpha_parameter(const MatN& g, const FieldElement& t, const FieldElement& sqrt_z);

}  // namespace trigen
