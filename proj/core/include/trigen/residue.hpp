#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trigen/matgroup.hpp"

namespace trigen {

/// Polynomials over F_p, constant term first, no trailing zeros.
namespace fp {

using Poly = std::vector<std::uint64_t>;

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);
void trim(Poly& a);
Poly sub(const Poly& a, const Poly& b, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
/// Remainder of a modulo a nonzero b.
Poly rem(const Poly& a, const Poly& b, std::uint64_t p);
/// Quotient of a by a nonzero b.
Poly quo(const Poly& a, const Poly& b, std::uint64_t p);
Poly gcd(Poly a, Poly b, std::uint64_t p);
/// base^e mod m.
Poly powmod(const Poly& base, const Integer& e, const Poly& m, std::uint64_t p);

/// Degrees of the irreducible factors of a squarefree f, with multiplicity
/// (distinct-degree factorisation), ascending.
std::vector<int> factor_degrees(const Poly& f, std::uint64_t p);

/// Monic irreducible factors of a squarefree f (distinct-degree, then
/// equal-degree splitting with a fixed seed), sorted by degree and then by
/// coefficients.
std::vector<Poly> factor(const Poly& f, std::uint64_t p);

}  // namespace fp

/// O_K / p O_K presented as F_p[x]/(f mod p). Elements are indices
/// sum c_i p^i with 0 <= c_i < p (power-basis coefficients).
class ResidueRing {
 public:
  using Elem = std::uint32_t;

  /// Throws DomainError when p is not prime, p >= 2^31, p divides disc(f)
  /// (which covers the integral-basis index), or p^n does not fit in 32 bits.
  /// Multiplication tables are built when p^n <= table_cap.
  ResidueRing(FieldPtr field, std::uint64_t p, std::uint64_t table_cap = 1024);

  /// F_p[x]/(g) for a monic irreducible g, without an attached number field.
  static ResidueRing quotient(std::uint64_t p, const fp::Poly& g, std::uint64_t table_cap = 1024);

  const FieldPtr& field() const { return field_; }
  std::uint64_t p() const { return p_; }
  int degree() const { return n_; }
  std::uint64_t size() const { return size_; }
  const fp::Poly& modulus() const { return f_; }
  /// Irreducible factor degrees of f mod p; R is a field iff there is one.
  const std::vector<int>& factor_degrees() const { return factor_degrees_; }
  bool is_field() const { return factor_degrees_.size() == 1; }
  /// Bytes per coefficient in the canonical encoding: 1, 2 or 4.
  unsigned limb_bytes() const { return limb_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem mul(Elem a, Elem b) const;

  std::vector<std::uint64_t> coeffs(Elem a) const;
  Elem from_coeffs(const std::vector<std::uint64_t>& c) const;
  /// Throws DomainError when p divides a coordinate denominator.
  Elem reduce(const FieldElement& a) const;

  /// Image under F_p[x]/(f) -> F_p[x]/(g) for a factor ring g | f.
  Elem project(Elem a, const ResidueRing& factor) const;
  /// The residue fields F_p[x]/(g_i), one per irreducible factor of f mod p.
  std::vector<ResidueRing> factor_rings(std::uint64_t table_cap = 1024) const;

 private:
  ResidueRing() = default;
  void init(std::uint64_t table_cap);
  Elem mul_slow(Elem a, Elem b) const;

  FieldPtr field_;
  std::uint64_t p_ = 0;
  int n_ = 0;
  std::uint64_t size_ = 0;
  unsigned limb_ = 1;
  fp::Poly f_;
  std::vector<int> factor_degrees_;
  std::vector<Elem> add_table_, mul_table_;
};

/// Square matrix over a ResidueRing, row-major element indices.
struct ResidueMat {
  std::size_t n = 0;
  std::vector<ResidueRing::Elem> e;

  ResidueRing::Elem& operator()(std::size_t i, std::size_t j) { return e[i * n + j]; }
  ResidueRing::Elem operator()(std::size_t i, std::size_t j) const { return e[i * n + j]; }
  bool operator==(const ResidueMat&) const = default;
};

ResidueMat residue_identity(std::size_t n);
ResidueMat residue_mul(const ResidueRing& ring, const ResidueMat& a, const ResidueMat& b);
ResidueRing::Elem residue_det(const ResidueRing& ring, const ResidueMat& a);
/// Inverse of a finite-order matrix as a power of itself. Throws CapExceeded
/// when the order exceeds max_order.
ResidueMat residue_inverse(const ResidueRing& ring, const ResidueMat& a, std::uint64_t max_order = 100'000'000);

/// Entrywise reduction. Throws DomainError for a denominator divisible by p.
ResidueMat reduce_mod(const MatN& g, const ResidueRing& ring);
/// Entrywise ResidueRing::project.
ResidueMat project(const ResidueMat& m, const ResidueRing& ring, const ResidueRing& factor);

/// Canonical encoding: for each entry in row-major order, its n power-basis
/// coefficients, each as a little-endian limb of limb_bytes() bytes.
std::string encode(const ResidueRing& ring, const ResidueMat& m);
ResidueMat decode(const ResidueRing& ring, std::size_t n, const std::string& bytes);

}  // namespace trigen
