#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "trigen/numberfield.hpp"

namespace trigen {

/// Square matrix with entries in a number field.
class MatN {
 public:
  MatN() = default;
  /// Zero matrix.
  MatN(FieldPtr field, std::size_t n);

  static MatN identity(FieldPtr field, std::size_t n);
  static MatN from_rows(const std::vector<std::vector<FieldElement>>& rows);
  /// Entries given as rationals (embedded as constants).
  static MatN from_rationals(FieldPtr field, const std::vector<std::vector<Rational>>& rows);
  static MatN diagonal(const std::vector<FieldElement>& diag);
  /// I + x E_ij.
  static MatN elementary(FieldPtr field, std::size_t n, std::size_t i, std::size_t j, const FieldElement& x);

  std::size_t size() const { return n_; }
  const FieldPtr& field() const { return field_; }
  FieldElement& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const FieldElement& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  MatN operator*(const MatN& b) const;
  MatN operator*(const FieldElement& c) const;
  MatN operator-() const;
  bool operator==(const MatN& b) const;
  bool operator!=(const MatN& b) const { return !(*this == b); }

  FieldElement det() const;
  /// Throws DomainError when singular.
  MatN inverse() const;
  MatN pow(long e) const;
  MatN transpose() const;
  bool is_identity() const;
  /// Every entry integral in the field's configured order.
  bool is_integral() const;

  std::string to_string() const;

 private:
  FieldPtr field_;
  std::size_t n_ = 0;
  std::vector<FieldElement> entries_;
};

/// Commutator a b a^-1 b^-1.
MatN commutator(const MatN& a, const MatN& b);
/// g h g^-1.
MatN conjugate(const MatN& g, const MatN& h);

struct Letter {
  std::string generator;
  long exponent = 1;
  bool operator==(const Letter&) const = default;
};

/// Formal word in named generators, read left to right.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  static Word single(std::string generator, long exponent = 1) { return Word({{std::move(generator), exponent}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  /// Sum of |exponent| over letters.
  long length() const;

  Word operator*(const Word& other) const;
  Word inverse() const;
  /// g w g^-1.
  Word conjugated_by(const Word& g) const;
  /// Merges adjacent letters with the same generator and drops zero exponents.
  Word reduced() const;

  bool operator==(const Word&) const = default;
  std::string to_string() const;

 private:
  std::vector<Letter> letters_;
};

/// Named generator matrices; inverses are cached.
class Alphabet {
 public:
  void add(const std::string& name, const MatN& m);
  bool contains(const std::string& name) const { return gens_.count(name) != 0; }
  const MatN& matrix(const std::string& name) const;
  const MatN& inverse(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  struct Entry {
    MatN m, inv;
  };
  std::map<std::string, Entry> gens_;
};

/// Exact product of generator powers, left to right. Throws DomainError for an
/// unknown generator or an empty word with an empty alphabet.
MatN word_eval(const Word& w, const Alphabet& alphabet);

/// Sign convention for the Weyl factor.
enum class WeylConvention {
  NegUpper,  ///< weyl = [[0,-1],[1,0]]; torus = diag(1/c, c)
  PosUpper,  ///< weyl = [[0,1],[-1,0]]; torus = diag(-1/c, -c)
};

struct BruhatFactors {
  MatN u1;     ///< upper unipotent [[1, a/c],[0,1]]
  MatN torus;  ///< diagonal
  MatN weyl;
  MatN u2;     ///< upper unipotent [[1, d/c],[0,1]]
  bool is_borel = false;  ///< c = 0: element = u1 * torus, weyl = u2 = I
  WeylConvention convention = WeylConvention::NegUpper;

  MatN recompose() const { return u1 * torus * weyl * u2; }
  /// Same decomposition with the other sign convention (torus and weyl both negated).
  BruhatFactors with_convention(WeylConvention c) const;
};

/// g = u1 * torus * weyl * u2 for g in SL(2) with c != 0; Borel shape when
/// c = 0. Throws DomainError if det(g) != 1 or g is not 2x2.
BruhatFactors bruhat_decompose(const MatN& g, WeylConvention convention = WeylConvention::NegUpper);

}  // namespace trigen
