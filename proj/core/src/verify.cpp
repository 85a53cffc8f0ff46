#include "trigen/verify.hpp"

#include <array>
#include <cstring>
#include <random>
#include <thread>
#include <unordered_set>

namespace trigen {

Integer sl_order_over_field(const Integer& q, std::size_t k) {
  Integer out = 1;
  for (std::size_t i = 0; i < k * (k - 1) / 2; ++i) out *= q;
  for (std::size_t i = 2; i <= k; ++i) {
    Integer qi = 1;
    for (std::size_t j = 0; j < i; ++j) qi *= q;
    out *= qi - 1;
  }
  return out;
}

Integer enumerate_sl_order(const ResidueRing& ring, std::size_t k, std::uint64_t cap) {
  const std::uint64_t q = ring.size();
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < k * k; ++i) {
    total *= q;
    if (total > cap) throw CapExceeded("enumeration of " + std::to_string(k) + "x" + std::to_string(k) +
                                       " matrices exceeds the cap of " + std::to_string(cap));
  }
  ResidueMat m{k, std::vector<ResidueRing::Elem>(k * k, 0)};
  std::uint64_t count = 0;
  while (true) {
    if (residue_det(ring, m) == ring.one()) ++count;
    std::size_t i = 0;
    while (i < m.e.size()) {
      if (++m.e[i] < q) break;
      m.e[i] = 0;
      ++i;
    }
    if (i == m.e.size()) break;
  }
  return Integer(static_cast<unsigned long>(count));
}

AmbientOrder ambient_order(const ResidueRing& ring, std::size_t k, std::uint64_t enumeration_cap) {
  if (k == 0) throw DomainError("matrix size must be positive");
  if (ring.size() <= kEnumerationRingLimit) {
    unsigned __int128 total = 1;
    bool fits = true;
    for (std::size_t i = 0; i < k * k && fits; ++i) {
      total *= ring.size();
      fits = total <= enumeration_cap;
    }
    if (fits) return {enumerate_sl_order(ring, k, enumeration_cap), AmbientOrder::Method::Enumeration};
  }
  Integer out = 1;
  const Integer p(static_cast<unsigned long>(ring.p()));
  for (int d : ring.factor_degrees()) {
    Integer q;
    mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(d));
    out *= sl_order_over_field(q, k);
  }
  return {out, AmbientOrder::Method::Factorization};
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

using Packed = std::array<std::uint64_t, 4>;

struct PackedHash {
  std::size_t operator()(const Packed& a) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (auto w : a) {
      h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ULL;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
  }
};

struct PackedKey {
  using Key = Packed;
  using Hash = PackedHash;
  static Key make(const ResidueRing& ring, const ResidueMat& m) {
    const std::string s = encode(ring, m);
    Key k{};
    std::memcpy(k.data(), s.data(), s.size());
    return k;
  }
};

struct StringKey {
  using Key = std::string;
  using Hash = std::hash<std::string>;
  static Key make(const ResidueRing& ring, const ResidueMat& m) { return encode(ring, m); }
};

template <class K>
ClosureResult closure_impl(const ResidueRing& ring, const std::vector<ResidueMat>& gens_in, const ClosureOptions& opt,
                           const Integer& ambient) {
  const std::size_t n = gens_in.front().n;
  std::vector<ResidueMat> gens;
  for (const auto& g : gens_in) {
    if (g.n != n) throw DomainError("generators have different sizes");
    gens.push_back(g);
  }
  for (const auto& g : gens_in) {
    ResidueMat inv = residue_inverse(ring, g);
    if (!(inv == g)) gens.push_back(std::move(inv));
  }

  ClosureResult res;
  res.ambient_order = ambient;
  std::unordered_set<typename K::Key, typename K::Hash> seen;
  std::vector<ResidueMat> frontier{residue_identity(n)};
  seen.insert(K::make(ring, frontier.front()));
  if (opt.keep_elements) res.elements.push_back(frontier.front());
  res.frontier_peak = 1;
  const unsigned threads = std::max(1u, opt.threads);

  auto full = [&] { return Integer(static_cast<unsigned long>(seen.size())) == ambient; };
  while (!frontier.empty() && !res.capped && !full()) {
    // Products are computed in chunks (possibly in parallel) and merged in
    // frontier order, so the result never depends on the thread count.
    const std::size_t chunks = std::min<std::size_t>(threads, frontier.size());
    std::vector<std::vector<std::pair<typename K::Key, ResidueMat>>> prod(chunks);
    auto work = [&](std::size_t c) {
      const std::size_t lo = frontier.size() * c / chunks, hi = frontier.size() * (c + 1) / chunks;
      prod[c].reserve((hi - lo) * gens.size());
      for (std::size_t i = lo; i < hi; ++i)
        for (const auto& g : gens) {
          ResidueMat y = residue_mul(ring, frontier[i], g);
          auto key = K::make(ring, y);
          prod[c].emplace_back(std::move(key), std::move(y));
        }
    };
    if (chunks == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(work, c);
      for (auto& t : pool) t.join();
    }
    std::vector<ResidueMat> next;
    for (auto& part : prod)
      for (auto& [key, m] : part) {
        if (seen.size() >= opt.max_elements) {
          res.capped = true;
          break;
        }
        if (seen.insert(std::move(key)).second) {
          if (opt.keep_elements) res.elements.push_back(m);
          next.push_back(std::move(m));
        }
      }
    frontier = std::move(next);
    res.frontier_peak = std::max(res.frontier_peak, frontier.size());
  }

  res.elements_visited = seen.size();
  res.subgroup_order = Integer(static_cast<unsigned long>(seen.size()));
  if (full()) {
    res.capped = false;
    res.surjective = Tri::Yes;
    res.index = Integer(1);
  } else if (res.capped) {
    res.surjective = Tri::Unknown;
  } else {
    if (ambient % res.subgroup_order != 0)
      throw std::logic_error("subgroup order " + to_string(res.subgroup_order) + " does not divide " +
                             to_string(ambient));
    res.index = ambient / res.subgroup_order;
    res.surjective = Tri::No;
  }
  return res;
}

}  // namespace

ClosureResult closure(const ResidueRing& ring, const std::vector<ResidueMat>& generators, const ClosureOptions& options) {
  if (generators.empty()) throw DomainError("closure needs at least one generator");
  const std::size_t n = generators.front().n;
  for (const auto& g : generators)
    if (residue_det(ring, g) != ring.one()) throw DomainError("generator does not have determinant 1");
  const Integer ambient = options.ambient ? *options.ambient : ambient_order(ring, n, options.enumeration_cap).order;
  const std::size_t bytes = n * n * static_cast<std::size_t>(ring.degree()) * ring.limb_bytes();
  if (bytes <= sizeof(Packed)) return closure_impl<PackedKey>(ring, generators, options, ambient);
  return closure_impl<StringKey>(ring, generators, options, ambient);
}

namespace {

bool is_scalar(const ResidueMat& m) {
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      if (i != j ? m(i, j) != 0 : m(i, i) != m(0, 0)) return false;
  return true;
}

ResidueMat power(const ResidueRing& ring, ResidueMat a, std::uint64_t e) {
  ResidueMat out = residue_identity(a.n);
  while (e > 0) {
    if (e & 1) out = residue_mul(ring, out, a);
    a = residue_mul(ring, a, a);
    e >>= 1;
  }
  return out;
}

std::uint64_t element_order(const ResidueRing& ring, const ResidueMat& a) {
  const ResidueMat id = residue_identity(a.n);
  ResidueMat cur = a;
  for (std::uint64_t k = 1; k <= 100'000'000; ++k) {
    if (cur == id) return k;
    cur = residue_mul(ring, cur, a);
  }
  throw CapExceeded("element order exceeds 10^8");
}

}  // namespace

ClosureResult closure_factorwise(const ResidueRing& ring, const std::vector<ResidueMat>& generators,
                                 const ClosureOptions& options, std::size_t witness_tries) {
  if (generators.empty()) throw DomainError("closure needs at least one generator");
  const std::size_t k = generators.front().n;
  const std::vector<ResidueRing> fields = ring.factor_rings();

  ClosureResult res;
  res.method = ClosureResult::Method::Factorwise;
  res.ambient_order = 1;
  res.subgroup_order = 1;
  bool all_onto = true, unknown = false;
  for (const auto& f : fields) {
    std::vector<ResidueMat> gens;
    for (const auto& g : generators) gens.push_back(project(g, ring, f));
    ClosureOptions fo = options;
    fo.keep_elements = false;
    fo.ambient = sl_order_over_field(Integer(static_cast<unsigned long>(f.size())), k);
    ClosureResult fr = closure(f, gens, fo);
    res.ambient_order *= fr.ambient_order;
    res.subgroup_order = std::max(res.subgroup_order, fr.subgroup_order);
    res.elements_visited += fr.elements_visited;
    res.frontier_peak = std::max(res.frontier_peak, fr.frontier_peak);
    if (fr.surjective == Tri::No) all_onto = false;
    if (fr.surjective == Tri::Unknown) unknown = true;
    res.factors.push_back(std::move(fr));
  }
  if (!all_onto) {
    res.surjective = Tri::No;
    return res;
  }
  if (unknown) {
    res.capped = true;
    return res;
  }
  bool quasisimple = true;
  for (const auto& f : fields)
    if (k == 2 && f.size() <= 3) quasisimple = false;
  if (!quasisimple) return res;

  // Witness search: random words in the generators and their inverses.
  std::vector<ResidueMat> alphabet = generators;
  for (const auto& g : generators) alphabet.push_back(residue_inverse(ring, g));
  std::mt19937_64 rng(0x676f7572ULL);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  const std::size_t m = fields.size();
  std::vector<char> done(m * m, 0);
  std::size_t remaining = m * (m - 1) / 2;
  ResidueMat walk = residue_identity(k);
  for (std::size_t t = 0; t < witness_tries && remaining > 0; ++t) {
    for (int step = 0; step < 8; ++step) walk = residue_mul(ring, walk, alphabet[pick(rng)]);
    std::vector<ResidueMat> parts;
    std::vector<std::uint64_t> orders;
    for (const auto& f : fields) {
      parts.push_back(project(walk, ring, f));
      orders.push_back(element_order(f, parts.back()));
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const std::size_t a = std::min(i, j), b = std::max(i, j);
        if (done[a * m + b]) continue;
        if (!is_scalar(power(fields[i], parts[i], orders[j]))) {
          done[a * m + b] = 1;
          --remaining;
        }
      }
  }
  if (remaining == 0) {
    res.surjective = Tri::Yes;
    res.subgroup_order = res.ambient_order;
    res.index = Integer(1);
  }
  return res;
}

std::vector<ResidueMat> elementary_generating_set(std::size_t k) {
  std::vector<ResidueMat> out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      ResidueMat m = residue_identity(k);
      m(i, j) = 1;
      out.push_back(std::move(m));
    }
  return out;
}

// ---------------------------------------------------------------------------

Certificate certify(const GeneratorTriple& triple, const std::vector<std::uint64_t>& primes,
                    const std::optional<ElementaryCertificate>& elementary, const std::optional<ThetaCertificate>& theta,
                    const CertifyOptions& options) {
  Certificate cert;
  cert.case_tag = triple.case_tag;
  cert.theta = theta;
  std::vector<std::string> failures;
  bool unknown = false;

  if (elementary) {
    cert.word_checks = verify_elementary(*elementary, triple.alphabet(), triple.subfield);
    for (std::size_t i = 0; i < cert.word_checks.size(); ++i)
      if (!cert.word_checks[i]) {
        cert.words_ok = false;
        failures.push_back("word identity for target " + std::to_string(i));
      }
  }
  if (theta) {
    for (const auto& [r, idx] : theta->indices)
      if (idx <= 0) failures.push_back("theta index at r = " + std::to_string(r));
  }

  for (auto p : primes) {
    PrimeReport pr;
    pr.p = p;
    if (triple.case_tag == CaseTag::SU21) {
      pr.status = PrimeReport::Status::Skipped;
      pr.reason = "congruence closure applies to SL only";
      cert.primes.push_back(std::move(pr));
      continue;
    }
    try {
      const ResidueRing ring(triple.gens.front().matrix.field(), p);
      pr.factor_degrees = ring.factor_degrees();
      std::vector<ResidueMat> gens;
      for (const auto& g : triple.gens) gens.push_back(reduce_mod(g.matrix, ring));
      ClosureOptions co = options.closure;
      if (!co.ambient) {
        const AmbientOrder a = options.ambient_provider ? options.ambient_provider(ring, triple.matrix_size())
                                                        : ambient_order(ring, triple.matrix_size(), co.enumeration_cap);
        co.ambient = a.order;
        pr.ambient_method = a.method;
      }
      const bool split = ring.factor_degrees().size() > 1;
      if (split && *co.ambient > Integer(static_cast<unsigned long>(co.max_elements)))
        pr.closure = closure_factorwise(ring, gens, co);
      else
        pr.closure = closure(ring, gens, co);
      if (pr.closure->surjective == Tri::No) failures.push_back("p = " + std::to_string(p) + " not surjective");
      if (pr.closure->surjective == Tri::Unknown) unknown = true;
    } catch (const DomainError& e) {
      pr.status = PrimeReport::Status::Rejected;
      pr.reason = e.what();
    }
    cert.primes.push_back(std::move(pr));
  }

  if (!failures.empty()) {
    cert.verdict = Verdict::Fail;
    cert.failing_component = failures.front();
    for (std::size_t i = 1; i < failures.size(); ++i) cert.failing_component += "; " + failures[i];
  } else {
    cert.verdict = unknown ? Verdict::Unknown : Verdict::Pass;
  }
  return cert;
}

}  // namespace trigen
