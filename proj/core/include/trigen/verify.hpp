#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trigen/construct.hpp"
#include "trigen/residue.hpp"

namespace trigen {

struct AmbientOrder {
  Integer order;
  enum class Method { Enumeration, Factorization } method = Method::Enumeration;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;
inline constexpr std::uint64_t kEnumerationRingLimit = 49;
inline constexpr std::size_t kDefaultClosureCap = 2'000'000;

/// |SL(k, q)| = q^(k(k-1)/2) prod_{i=2..k} (q^i - 1).
Integer sl_order_over_field(const Integer& q, std::size_t k);

/// |SL(k, R)|. Enumerates every matrix when |R| <= 49 and |R|^(k^2) <= cap;
/// otherwise multiplies field orders over the factorisation of f mod p, which
/// is squarefree for the accepted primes.
AmbientOrder ambient_order(const ResidueRing& ring, std::size_t k, std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// Brute-force count of det = 1 matrices. Throws CapExceeded when
/// |R|^(k^2) > cap.
Integer enumerate_sl_order(const ResidueRing& ring, std::size_t k, std::uint64_t cap = kDefaultEnumerationCap);

enum class Tri { Yes, No, Unknown };
std::string to_string(Tri t);

struct ClosureOptions {
  std::size_t max_elements = kDefaultClosureCap;
  unsigned threads = 1;
  bool keep_elements = false;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  /// Precomputed |SL(k, R)|, e.g. from a cache.
  std::optional<Integer> ambient;
};

struct ClosureResult {
  enum class Method { Bfs, Factorwise } method = Method::Bfs;
  Integer subgroup_order;  ///< exact, or a lower bound when capped or factorwise
  Integer ambient_order;
  std::optional<Integer> index;  ///< absent when capped
  Tri surjective = Tri::Unknown;
  std::size_t frontier_peak = 0;
  std::size_t elements_visited = 0;
  bool capped = false;
  std::vector<ResidueMat> elements;  ///< filled when keep_elements is set
  /// Factorwise only: one closure per residue field of R.
  std::vector<ClosureResult> factors;
};

/// Breadth-first closure of the identity under right multiplication by the
/// generators and their inverses, keyed by the canonical encoding. Stops early
/// once the ambient order is reached.
ClosureResult closure(const ResidueRing& ring, const std::vector<ResidueMat>& generators,
                      const ClosureOptions& options = {});

/// Decides surjectivity onto SL(k, R) = prod SL(k, F_i) for a split R
/// without enumerating the product. Each projection is closed separately;
/// for each pair i < j an element (a, b) with b^m = 1 and a^m non-scalar
/// shows the pair projection is onto. When every SL(k, F_i) is perfect with
/// simple quotient by scalars this forces the whole group (Ribet's lemma).
/// Answers No only if some projection is not onto; Unknown when no witness
/// turns up in `witness_tries` random words or a factor is SL(2, 2), SL(2, 3).
ClosureResult closure_factorwise(const ResidueRing& ring, const std::vector<ResidueMat>& generators,
                                 const ClosureOptions& options = {}, std::size_t witness_tries = 400);

/// Elementary generators E_ij(1), i != j, of SL(k, F_p) reduced into the ring.
std::vector<ResidueMat> elementary_generating_set(std::size_t k);

enum class Verdict { Pass, Fail, Unknown };
std::string to_string(Verdict v);

struct PrimeReport {
  std::uint64_t p = 0;
  enum class Status { Ok, Rejected, Skipped } status = Status::Ok;
  std::string reason;
  std::vector<int> factor_degrees;
  std::optional<ClosureResult> closure;
  std::optional<AmbientOrder::Method> ambient_method;
};

struct Certificate {
  CaseTag case_tag = CaseTag::SL2_NONCM;
  std::vector<bool> word_checks;
  bool words_ok = true;
  std::optional<ThetaCertificate> theta;
  std::vector<PrimeReport> primes;
  Verdict verdict = Verdict::Pass;
  std::string failing_component;
};

struct CertifyOptions {
  ClosureOptions closure;
  /// Supplies |SL(k, R)| (e.g. through a cache); ambient_order when empty.
  std::function<AmbientOrder(const ResidueRing&, std::size_t)> ambient_provider;
};

/// Re-verifies the word identities, runs one closure per prime (factorwise
/// when R splits and |SL(k, R)| exceeds the closure cap) and aggregates
/// a verdict: PASS iff every word identity holds and every prime is
/// surjective; UNKNOWN when nothing failed but some closure hit the cap.
/// Rejected primes (ramified, or dividing a denominator) are reported and
/// otherwise ignored.
/// SU(2,1) triples skip the congruence step.
Certificate certify(const GeneratorTriple& triple, const std::vector<std::uint64_t>& primes,
                    const std::optional<ElementaryCertificate>& elementary = std::nullopt,
                    const std::optional<ThetaCertificate>& theta = std::nullopt, const CertifyOptions& options = {});

}  // namespace trigen
