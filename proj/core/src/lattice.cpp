#include "trigen/lattice.hpp"

#include <utility>

namespace trigen {

ZMatrix ZMatrix::from_rows(const std::vector<ZVector>& rows) {
  if (rows.empty()) return {};
  ZMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

ZMatrix ZMatrix::identity(std::size_t n) {
  ZMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ZVector ZMatrix::row(std::size_t i) const {
  return ZVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

namespace {

void axpy_row(ZMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
  // row[dst] -= f * row[src]
  if (f == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= f * m(src, j);
}

void swap_rows(ZMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void negate_row(ZMatrix& m, std::size_t a) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

HermiteLattice::HermiteLattice(const std::vector<ZVector>& generators) {
  if (generators.empty()) throw std::invalid_argument("lattice needs at least one generator");
  dim_ = generators.front().size();
  ngens_ = generators.size();
  ZMatrix h = ZMatrix::from_rows(generators);
  ZMatrix u = ZMatrix::identity(ngens_);
  const std::size_t k = ngens_;

  std::size_t r = 0;
  for (std::size_t c = 0; c < dim_ && r < k; ++c) {
    // Euclid down the column until a single nonzero entry remains at row r.
    while (true) {
      std::size_t best = k;
      for (std::size_t i = r; i < k; ++i)
        if (h(i, c) != 0 && (best == k || abs(h(i, c)) < abs(h(best, c)))) best = i;
      if (best == k) break;
      swap_rows(h, r, best);
      swap_rows(u, r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < k; ++i) {
        if (h(i, c) == 0) continue;
        const Integer q = floor_div(h(i, c), h(r, c));
        axpy_row(h, i, r, q);
        axpy_row(u, i, r, q);
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = floor_div(h(i, c), h(r, c));
      axpy_row(h, i, r, q);
      axpy_row(u, i, r, q);
    }
    pivots_.push_back(c);
    ++r;
  }
  for (std::size_t i = 0; i < r; ++i) {
    basis_.push_back(h.row(i));
    transform_.push_back(u.row(i));
  }
}

std::optional<ZVector> HermiteLattice::express(const ZVector& v) const {
  if (v.size() != dim_) throw std::invalid_argument("vector dimension does not match lattice");
  ZVector rest = v;
  ZVector coeffs(ngens_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const std::size_t p = pivots_[i];
    // Entries left of this pivot are already zero.
    if (rest[p] % basis_[i][p] != 0) return std::nullopt;
    const Integer c = rest[p] / basis_[i][p];
    if (c == 0) continue;
    for (std::size_t j = 0; j < dim_; ++j) rest[j] -= c * basis_[i][j];
    for (std::size_t j = 0; j < ngens_; ++j) coeffs[j] += c * transform_[i][j];
  }
  for (const auto& x : rest)
    if (x != 0) return std::nullopt;
  return coeffs;
}

std::optional<Integer> HermiteLattice::scale_into(const ZVector& v) const {
  if (v.size() != dim_) throw std::invalid_argument("vector dimension does not match lattice");
  // Rational coordinates of v in the echelon basis; N is the lcm of denominators.
  QVector rest(v.begin(), v.end());
  Integer n = 1;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const std::size_t p = pivots_[i];
    Rational c = rest[p] / Rational(basis_[i][p]);
    if (c == 0) continue;
    n = lcm(n, c.get_den());
    for (std::size_t j = 0; j < dim_; ++j) rest[j] -= c * Rational(basis_[i][j]);
  }
  for (const auto& x : rest)
    if (x != 0) return std::nullopt;
  return n;
}

Integer HermiteLattice::exponent() const {
  if (!full_rank()) throw DomainError("lattice is not of full rank");
  Integer n = 1;
  for (std::size_t j = 0; j < dim_; ++j) {
    ZVector e(dim_);
    e[j] = 1;
    n = lcm(n, *scale_into(e));
  }
  return n;
}

Integer HermiteLattice::index() const {
  if (!full_rank()) throw DomainError("lattice is not of full rank");
  Integer d = 1;
  for (std::size_t i = 0; i < basis_.size(); ++i) d *= basis_[i][pivots_[i]];
  return d;
}

}  // namespace trigen
