#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "trigen/numberfield.hpp"

namespace trigen {

/// Where select_theta draws its candidate units from.
struct UnitSource {
  enum class Mode { Pell, Configured, Search };

  Mode mode = Mode::Pell;
  /// Configured mode: units as integral-basis coordinate vectors.
  std::vector<QVector> units;
  /// Search mode: coordinates range over [-height_bound, height_bound].
  long height_bound = 2;

  static UnitSource pell() { return {}; }
  static UnitSource configured(std::vector<QVector> units) { return {Mode::Configured, std::move(units), 0}; }
  static UnitSource search(long height) { return {Mode::Search, {}, height}; }
};

/// Evidence that theta behaves as the distinguished unit: Z[theta^r] has finite
/// index in O_K for every checked r.
struct ThetaCertificate {
  FieldElement theta;
  long r_checked = 0;
  std::vector<std::pair<long, Integer>> indices;  ///< (r, [O_K : Z[theta^r]])
  std::vector<bool> full_degree;                  ///< deg minpoly(theta^r) == n, r = 1..r_checked
};

inline constexpr long kDefaultRMax = 12;

/// True when a is a unit of the configured order (integral with norm +-1).
bool is_unit(const FieldElement& a);

/// Roots of unity in a degree-n field have order at most this bound, since
/// phi(m) >= sqrt(m/2).
long root_of_unity_order_bound(int degree);
bool is_root_of_unity(const FieldElement& a);

/// Fundamental unit (> 1 in the embedding sending the second integral basis
/// element w to (T + sqrt D)/2) of the order spanned by the integral basis of
/// a real quadratic field, by continued-fraction expansion. Throws DomainError
/// if the field is not real quadratic.
FieldElement fundamental_unit_real_quadratic(const NumberField& field);

/// Candidate units in source order. Pell mode requires a real quadratic field;
/// search mode enumerates coordinate vectors lexicographically.
std::vector<FieldElement> collect_units(const NumberField& field, const UnitSource& source);

/// First unit (in source order) of infinite order such that for every
/// r = 1..r_max the minimal polynomial of theta^r has full degree and
/// Z[theta^r] has finite index. Throws DomainError when no candidate passes.
ThetaCertificate select_theta(const NumberField& field, const UnitSource& source, long r_max = kDefaultRMax);

/// CM reduction: checks that the embedding exhibits field as a CM extension of
/// the subfield and selects theta inside the totally real subfield.
ThetaCertificate select_theta_cm(const SubfieldEmbedding& embedding, const UnitSource& subfield_source,
                                 long r_max = kDefaultRMax);

/// Archimedean place data for an extension E/F: one (x(a), y(a)) pair per real
/// place a of F, and the number of complex places of F.
struct PlaceData {
  std::vector<std::pair<int, int>> real_places;
  int complex_places = 0;
};

/// Evaluates both sides of Card(A) + Card(B) = sum (x(a) + y(a)) + sum y(b)
/// with y(b) = [E : F]. Throws DomainError on inconsistent data.
bool check_eq_card(const NumberField& field_e, const NumberField& subfield_f, const PlaceData& places);

}  // namespace trigen
