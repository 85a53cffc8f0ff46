#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trigen/lattice.hpp"
#include "trigen/matgroup.hpp"
#include "trigen/su21.hpp"
#include "trigen/units.hpp"

namespace trigen {

enum class CaseTag { SL2_NONCM, SL2_CM, SL2_CMPRIME, SU21, SLN_MULTONE };

std::string to_string(CaseTag tag);
/// Throws std::invalid_argument for an unknown tag.
CaseTag parse_case_tag(const std::string& text);

struct NamedGenerator {
  std::string name;
  MatN matrix;
};

/// Generators of the constructed subgroup, each already raised to the r-th
/// power. Provenance records the field data the matrices were built from.
struct GeneratorTriple {
  CaseTag case_tag = CaseTag::SL2_NONCM;
  std::vector<NamedGenerator> gens;
  long r = 1;
  std::map<std::string, std::string> provenance;
  /// Set when elementary certificates are computed over a subfield F of the
  /// matrix field.
  std::optional<SubfieldEmbedding> subfield;

  const MatN& get(const std::string& name) const;
  Alphabet alphabet() const;
  std::size_t matrix_size() const { return gens.empty() ? 0 : gens.front().matrix.size(); }
};

/// h(theta) = diag(theta, theta^-1).
MatN torus_sl2(const FieldElement& theta);

/// {U+ = u+^r, U- = u-^r, H = h(theta)^r}. Throws DomainError for K = Q, unit
/// rank 0, a CM field (some power of theta of bounded order drops degree), or a
/// theta outside the field.
GeneratorTriple build_noncm(const FieldPtr& field, const ThetaCertificate& theta_cert, long r);

/// {H = h(theta)^r, U+ = u+^r, U- = [[1,0],[r alpha,1]]} over E with theta taken
/// from F. Requires alpha integral with alpha^2 = -beta, beta in F totally
/// positive.
GeneratorTriple build_cm(const SubfieldEmbedding& embedding, const FieldElement& alpha,
                         const ThetaCertificate& theta_cert, long r);

enum class Orientation { Upper, Lower };

struct ElementaryTarget {
  FieldElement target;
  Integer scale;          ///< least N_x >= 1 with N_x x reachable
  FieldElement achieved;  ///< N_x x
  std::vector<std::pair<long, Integer>> terms;  ///< (m, n): achieved = e sum n theta^(2 m r)
  Word word;
};

/// Words in the triple's generators realising elementary matrices E(N_x x).
struct ElementaryCertificate {
  Orientation orientation = Orientation::Upper;
  std::string h_name = "H";
  std::string u_name = "U+";
  long r = 1;
  std::vector<long> m_values;  ///< conjugation exponents whose terms span the lattice
  std::vector<ElementaryTarget> targets;
  Integer N;                          ///< N O_K is contained in the reachable lattice
  Integer lattice_index;              ///< [O_K : reachable lattice]
  std::vector<ZVector> lattice_basis;  ///< HNF rows, integral-basis coordinates
};

struct ElementaryOptions {
  long m_max = 0;  ///< 0 means 4n
  Orientation orientation = Orientation::Upper;
  std::string h_name = "H";
  std::string u_name = "U+";
};

/// The reachable lattice is spanned by e theta^(2 m r), e the off-diagonal entry
/// of u_gen, for m = 0..n-1 and then m = -1, -2, ... while the rank is short
/// and fewer than m_max terms are in use. Throws DomainError if the lattice
/// stays degenerate, u_gen is not elementary, or an entry is not integral.
ElementaryCertificate elementary_words(const FieldElement& theta, const MatN& u_gen, long r,
                                       const std::vector<FieldElement>& targets, const ElementaryOptions& options = {});

/// Integral basis of the order of `field` as elements.
std::vector<FieldElement> integral_basis_elements(const FieldPtr& field);

/// Re-evaluates every certificate word against the alphabet. Targets living in
/// a subfield are mapped through `embedding` first.
std::vector<bool> verify_elementary(const ElementaryCertificate& cert, const Alphabet& alphabet,
                                    const std::optional<SubfieldEmbedding>& embedding = std::nullopt);

struct CmPrimeElement {
  MatN g;
  FieldElement a, b, c, d;
  FieldElement t;  ///< relative trace of x, in F
  FieldElement n;  ///< relative norm of x, in F
  FieldElement theta;
  bool formula_a = false;  ///< a == 1 + x (theta - 1)/t
  bool formula_c = false;  ///< c == n (1 - theta^-1)/t
  bool a_outside_f = false;
  bool c_in_f = false;
};

/// x^2 = t x - n over F for x in E outside F. Returns (t, n) as elements of F.
std::pair<FieldElement, FieldElement> relative_trace_norm(const SubfieldEmbedding& embedding, const FieldElement& x);

/// g = [[1,0],[-x/theta,1]] [[1,(theta-1)/t],[0,1]] [[1,0],[x,1]] with theta a
/// unit of F, theta = 1 mod t O_F. Throws DomainError when t = 0 (the CM
/// construction covers it), x lies in F or is not integral, theta is not a
/// unit of F or violates the congruence, c vanishes, or (with
/// divisibility = N) x is not divisible by N!.
CmPrimeElement cmprime_g_element(const SubfieldEmbedding& embedding, const FieldElement& x,
                                 const FieldElement& theta, std::optional<long> divisibility = std::nullopt);

/// Least k in [1, k_max] with unit^k = 1 mod t O_F.
FieldElement congruent_unit_power(const FieldElement& unit, const FieldElement& t, long k_max = 100000);

/// {U+ = u+^r, U- = [[1,0],[r x,1]], H = h(theta)^r} over E.
GeneratorTriple build_cmprime(const SubfieldEmbedding& embedding, const FieldElement& x, const FieldElement& theta,
                              long r);

struct WedgeReport {
  std::vector<long> exponents;
  FieldElement det_upper;  ///< det of the vectors delta^k g^k x
  FieldElement det_lower;  ///< det of the row vectors delta^-k y g^-k
};

struct MultoneResult {
  GeneratorTriple triple;
  WedgeReport wedge;
};

/// Levi element m = diag(g, det(g)^-1), u = [[I, r x],[0,1]], u- its
/// transpose. Throws DomainError when either wedge determinant vanishes, the
/// sizes disagree, or g has no integral inverse.
MultoneResult build_sln_multone(std::size_t n, const MatN& levi_g, const std::vector<long>& exponents,
                                const std::vector<FieldElement>& u_col, long r = 1);

struct Su21Report {
  std::vector<std::pair<std::string, bool>> generator_checks;
  long commutator_height = 0;
  long commutators_checked = 0;
  long commutators_failed = 0;
};

struct Su21Build {
  GeneratorTriple triple;
  Su21Report report;
};

/// Unit of Q(sqrt z) with theta conj(theta) = 1 (the fundamental unit, squared
/// when its norm is -1), as an element of the setting's field.
FieldElement su21_norm_one_unit(const Su21Setting& setting);

/// [B(t; x1, u1), B(1; x2, u2)] lies in U_2alpha(t Z) for every pair with
/// 1 <= x_i <= height and the integral coordinates of u_i bounded by height.
Su21Report su21_commutator_checks(const Su21Setting& setting, const FieldElement& t, long height);

/// {H = diag(theta, theta^-2, theta)^r, U+ = I + r t sqrt z E_13, U- = h B h}
/// where B is the full-family generator with t = 1, u = 1, x = r.
Su21Build build_su21(const Su21Setting& setting, const FieldElement& t, long r, long commutator_height = 1);

}  // namespace trigen
