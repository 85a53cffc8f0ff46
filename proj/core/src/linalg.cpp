#include "trigen/linalg.hpp"

#include <utility>

namespace trigen {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& x) {
    const auto b = x.find_first_not_of(" \t");
    const auto e = x.find_last_not_of(" \t");
    x = (b == std::string::npos) ? std::string() : x.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = s.find('/');
  Integer num, den = 1;
  try {
    num = parse_integer(s.substr(0, slash));
    if (slash != std::string::npos) den = parse_integer(s.substr(slash + 1));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational literal '" + s + "'");
  }
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("malformed integer literal '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer literal '" + s + "'");
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(s, 10);
}

std::string to_string(const Rational& q) { return q.get_str(10); }
std::string to_string(const Integer& z) { return z.get_str(10); }

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows) {
  if (rows.empty()) return {};
  QMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QVector QMatrix::row(std::size_t i) const {
  return QVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

QVector QMatrix::col(std::size_t j) const {
  QVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

QMatrix QMatrix::operator*(const QMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix dimension mismatch");
  QMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

QVector QMatrix::operator*(const QVector& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("matrix/vector dimension mismatch");
  QVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

QVector operator*(const QVector& v, const QMatrix& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("vector/matrix dimension mismatch");
  QVector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(QMatrix& a, std::size_t ncols_to_reduce) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols_to_reduce && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    const Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Rational QMatrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  QMatrix a = *this;
  Rational d = 1;
  const std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      d = -d;
    }
    d *= a(c, c);
    const Rational inv = 1 / a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      const Rational f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return d;
}

std::size_t QMatrix::rank() const {
  QMatrix a = *this;
  return rref(a, cols_).size();
}

QMatrix QMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = rows_;
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  if (rref(aug, n).size() != n) throw DomainError("singular matrix");
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::optional<QVector> QMatrix::solve(const QVector& b) const {
  if (b.size() != rows_) throw std::invalid_argument("rhs dimension mismatch");
  QMatrix aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_) = b[i];
  }
  const auto pivots = rref(aug, cols_);
  for (std::size_t i = pivots.size(); i < rows_; ++i)
    if (aug(i, cols_) != 0) return std::nullopt;
  QVector x(cols_);
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug(k, cols_);
  return x;
}

std::vector<QVector> QMatrix::kernel() const {
  QMatrix a = *this;
  const auto pivots = rref(a, cols_);
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    QVector v(cols_);
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool is_zero(const QVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

bool is_integral(const QVector& v) {
  for (const auto& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

}  // namespace trigen
