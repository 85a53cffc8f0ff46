#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace trigen {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error the library raises on bad input or a failed
/// mathematical precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the mathematical data does not hold (non-integral
/// element, wrong signature, degenerate unit, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or memory cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Parses "a", "-a" or "a/b" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

using QVector = std::vector<Rational>;
using ZVector = std::vector<Integer>;

/// Dense row-major matrix over the rationals.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix identity(std::size_t n);
  static QMatrix from_rows(const std::vector<QVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  QVector row(std::size_t i) const;
  QVector col(std::size_t j) const;

  QMatrix operator*(const QMatrix& other) const;
  QVector operator*(const QVector& v) const;
  QMatrix transpose() const;
  bool operator==(const QMatrix& other) const = default;

  Rational det() const;
  std::size_t rank() const;
  /// Throws DomainError when singular.
  QMatrix inverse() const;
  /// Solves A x = b; nullopt if inconsistent. Picks the solution with free
  /// variables set to zero.
  std::optional<QVector> solve(const QVector& b) const;
  /// Basis of the right kernel { x : A x = 0 }.
  std::vector<QVector> kernel() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Row vector times matrix.
QVector operator*(const QVector& v, const QMatrix& m);

bool is_zero(const QVector& v);
bool is_integral(const QVector& v);

}  // namespace trigen
