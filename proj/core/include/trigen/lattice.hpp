#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "trigen/linalg.hpp"

namespace trigen {

/// Dense integer matrix, row-major.
class ZMatrix {
 public:
  ZMatrix() = default;
  ZMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static ZMatrix from_rows(const std::vector<ZVector>& rows);
  static ZMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  ZVector row(std::size_t i) const;
  bool operator==(const ZMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Row-style Hermite normal form of the lattice spanned by a list of integer
/// generator vectors, with the unimodular transform recorded so that lattice
/// vectors can be written back as integer combinations of the generators.
///
/// basis(): the nonzero HNF rows. Each row has a positive pivot, pivots move
/// strictly right, and entries above a pivot lie in [0, pivot).
class HermiteLattice {
 public:
  explicit HermiteLattice(const std::vector<ZVector>& generators);

  std::size_t ambient_dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  bool full_rank() const { return rank() == dim_; }
  const std::vector<ZVector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Integer coefficients c over the generators with sum c_i g_i = v, or
  /// nullopt when v is not in the lattice.
  std::optional<ZVector> express(const ZVector& v) const;
  bool contains(const ZVector& v) const { return express(v).has_value(); }

  /// Smallest N >= 1 with N v in the lattice; nullopt when no multiple of v
  /// lies in the lattice (v outside its rational span).
  std::optional<Integer> scale_into(const ZVector& v) const;

  /// Smallest N with N Z^n contained in the lattice (full rank only).
  Integer exponent() const;
  /// [Z^n : L] (full rank only).
  Integer index() const;

 private:
  std::size_t dim_ = 0;
  std::size_t ngens_ = 0;
  std::vector<ZVector> basis_;
  std::vector<ZVector> transform_;  // transform_[i]: coefficients of basis_[i] over generators
  std::vector<std::size_t> pivots_;
};

}  // namespace trigen
