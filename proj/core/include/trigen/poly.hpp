#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "trigen/linalg.hpp"

namespace trigen {

/// Univariate polynomial over Q, coefficients stored constant term first.
/// Always normalized: no trailing zero coefficients (the zero polynomial is
/// the empty vector).
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(QVector coeffs);
  static QPoly from_integers(const ZVector& coeffs);
  static QPoly monomial(const Rational& c, std::size_t degree);
  static QPoly x() { return monomial(1, 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const QVector& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  Rational leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }

  QPoly operator+(const QPoly& o) const;
  QPoly operator-(const QPoly& o) const;
  QPoly operator-() const;
  QPoly operator*(const QPoly& o) const;
  QPoly operator*(const Rational& c) const;
  bool operator==(const QPoly& o) const = default;

  /// Euclidean division; throws on a zero divisor.
  std::pair<QPoly, QPoly> divmod(const QPoly& d) const;
  QPoly operator%(const QPoly& d) const { return divmod(d).second; }
  QPoly operator/(const QPoly& d) const { return divmod(d).first; }

  QPoly derivative() const;
  QPoly monic() const;
  Rational eval(const Rational& x) const;

  /// True when every coefficient is an integer.
  bool has_integer_coeffs() const;
  std::string to_string(const std::string& var = "x") const;

 private:
  void normalize();
  QVector coeffs_;
};

/// Monic gcd.
QPoly gcd(const QPoly& a, const QPoly& b);

/// Extended gcd: returns (g, s, t) with s a + t b = g, g monic.
struct XGcd {
  QPoly g, s, t;
};
XGcd xgcd(const QPoly& a, const QPoly& b);

/// Closed rational interval. lo == hi denotes an exact point.
struct Interval {
  Rational lo, hi;
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
};

/// Interval extension of polynomial evaluation (Horner on intervals).
Interval eval_interval(const QPoly& p, const Interval& x);

/// Sturm chain of a squarefree polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const QPoly& p);
  /// Number of sign variations of the chain at x.
  int variations(const Rational& x) const;
  /// Number of distinct real roots in the half-open interval (a, b].
  int count_roots(const Rational& a, const Rational& b) const;
  /// Number of distinct real roots.
  int count_real_roots() const;
  const std::vector<QPoly>& chain() const { return chain_; }

 private:
  std::vector<QPoly> chain_;
};

/// Cauchy bound: every real root lies strictly inside (-B, B).
Rational cauchy_root_bound(const QPoly& p);

/// Isolating intervals (ascending) for the distinct real roots of p. Each
/// interval is either a single exact rational root (lo == hi) or an open
/// interval (lo, hi) with p(lo) p(hi) < 0 containing exactly one root.
std::vector<Interval> isolate_real_roots(const QPoly& p);

/// Halves an isolating interval of a root of p (non-degenerate case).
Interval refine_root(const QPoly& p, const Interval& iv);

}  // namespace trigen
