#include "trigen/residue.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <tuple>

namespace trigen {
namespace fp {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

}  // namespace

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
  while (nr != 0) {
    const std::int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) throw DomainError("element not invertible mod p");
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t x = i < a.size() ? a[i] : 0;
    const std::uint64_t y = i < b.size() ? b[i] : 0;
    out[i] = (x + p - y) % p;
  }
  trim(out);
  return out;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulm(a[i], b[j], p)) % p;
  trim(out);
  return out;
}

Poly rem(const Poly& a, const Poly& b, std::uint64_t p) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  Poly r = a;
  trim(r);
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  while (r.size() >= b.size()) {
    const std::uint64_t c = mulm(r.back(), lead_inv, p);
    const std::size_t shift = r.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = (r[shift + i] + p - mulm(c, b[i], p)) % p;
    trim(r);
  }
  return r;
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t li = inv_mod(a.back(), p);
    for (auto& c : a) c = mulm(c, li, p);
  }
  return a;
}

Poly powmod(const Poly& base, const Integer& e, const Poly& m, std::uint64_t p) {
  Poly result{1};
  result = rem(result, m, p);
  Poly b = rem(base, m, p);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result, p), m, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, b, p), m, p);
  }
  return result;
}

Poly quo(const Poly& a, const Poly& b, std::uint64_t p) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  Poly r = a;
  trim(r);
  if (r.size() < b.size()) return {};
  Poly q(r.size() - b.size() + 1, 0);
  const std::uint64_t li = inv_mod(b.back(), p);
  while (r.size() >= b.size()) {
    const std::uint64_t c = mulm(r.back(), li, p);
    const std::size_t shift = r.size() - b.size();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = (r[shift + i] + p - mulm(c, b[i], p)) % p;
    trim(r);
  }
  trim(q);
  return q;
}

namespace {

// (degree, product of the irreducible factors of that degree)
std::vector<std::pair<int, Poly>> distinct_degree(const Poly& f_in, std::uint64_t p) {
  Poly f = f_in;
  trim(f);
  std::vector<std::pair<int, Poly>> out;
  const Poly x{0, 1};
  Poly h = rem(x, f, p);  // x^(p^d) mod f
  const Integer pz(static_cast<unsigned long>(p));
  for (int d = 1; static_cast<int>(f.size()) - 1 >= 2 * d; ++d) {
    h = powmod(h, pz, f, p);
    const Poly g = gcd(f, sub(h, x, p), p);
    if (g.size() > 1) {
      out.emplace_back(d, g);
      f = quo(f, g, p);
      h = rem(h, f, p);
    }
  }
  if (f.size() > 1) out.emplace_back(static_cast<int>(f.size()) - 1, gcd(f, f, p));
  return out;
}

Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = ((i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0)) % p;
  trim(out);
  return out;
}

// Splits a product of distinct monic irreducibles of degree d.
void equal_degree(const Poly& g, int d, std::uint64_t p, std::mt19937_64& rng, std::vector<Poly>& out) {
  const int n = static_cast<int>(g.size()) - 1;
  if (n == d) {
    out.push_back(g);
    return;
  }
  Integer half;
  if (p != 2) {
    mpz_ui_pow_ui(half.get_mpz_t(), p, static_cast<unsigned long>(d));
    half = (half - 1) / 2;
  }
  std::uniform_int_distribution<std::uint64_t> coeff(0, p - 1);
  while (true) {
    Poly a(static_cast<std::size_t>(n));
    for (auto& c : a) c = coeff(rng);
    trim(a);
    if (a.size() < 2) continue;
    Poly b;
    if (p == 2) {
      // Trace to F_2 on each factor.
      Poly t = a;
      b = a;
      for (int i = 1; i < d; ++i) {
        t = rem(mul(t, t, p), g, p);
        b = add(b, t, p);
      }
    } else {
      b = sub(powmod(a, half, g, p), Poly{1}, p);
    }
    const Poly h = gcd(g, b, p);
    if (h.size() > 1 && h.size() < g.size()) {
      equal_degree(h, d, p, rng, out);
      equal_degree(quo(g, h, p), d, p, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<int> factor_degrees(const Poly& f, std::uint64_t p) {
  std::vector<int> out;
  for (const auto& [d, g] : distinct_degree(f, p))
    for (std::size_t k = 0; k < (g.size() - 1) / static_cast<std::size_t>(d); ++k) out.push_back(d);
  return out;
}

std::vector<Poly> factor(const Poly& f, std::uint64_t p) {
  std::mt19937_64 rng(0x7269676eULL);
  std::vector<Poly> out;
  for (const auto& [d, g] : distinct_degree(f, p)) equal_degree(g, d, p, rng, out);
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

}  // namespace fp

// ---------------------------------------------------------------------------

ResidueRing::ResidueRing(FieldPtr field, std::uint64_t p, std::uint64_t table_cap) : field_(std::move(field)), p_(p) {
  if (p < 2 || p >= (1ULL << 31)) throw DomainError("prime out of range: " + std::to_string(p));
  const Integer pz(static_cast<unsigned long>(p));
  if (mpz_probab_prime_p(pz.get_mpz_t(), 30) == 0) throw DomainError(std::to_string(p) + " is not prime");
  if (field_->poly_discriminant() % pz == 0)
    throw DomainError("p = " + std::to_string(p) + " divides disc(f); ramified or singular primes are rejected");
  if (field_->basis_index() % pz == 0)
    throw DomainError("p = " + std::to_string(p) + " divides the integral-basis index");
  for (const auto& c : field_->defining_coeffs()) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), pz.get_mpz_t());
    f_.push_back(r.get_ui());
  }
  fp::trim(f_);
  init(table_cap);
}

ResidueRing ResidueRing::quotient(std::uint64_t p, const fp::Poly& g, std::uint64_t table_cap) {
  ResidueRing r;
  r.p_ = p;
  r.f_ = g;
  fp::trim(r.f_);
  if (r.f_.size() < 2 || r.f_.back() != 1) throw DomainError("quotient modulus must be monic of positive degree");
  r.init(table_cap);
  if (!r.is_field()) throw DomainError("quotient modulus is not irreducible mod p");
  return r;
}

void ResidueRing::init(std::uint64_t table_cap) {
  n_ = static_cast<int>(f_.size()) - 1;
  unsigned __int128 s = 1;
  for (int i = 0; i < n_; ++i) {
    s *= p_;
    if (s > 0xFFFFFFFFULL) throw DomainError("residue ring too large for 32-bit element indices");
  }
  size_ = static_cast<std::uint64_t>(s);
  limb_ = p_ < 256 ? 1 : (p_ < 65536 ? 2 : 4);
  factor_degrees_ = fp::factor_degrees(f_, p_);
  if (size_ <= table_cap) {
    const std::size_t q = size_;
    add_table_.resize(q * q);
    mul_table_.resize(q * q);
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) {
        const auto ca = coeffs(static_cast<Elem>(a)), cb = coeffs(static_cast<Elem>(b));
        std::vector<std::uint64_t> sum(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) sum[i] = (ca[i] + cb[i]) % p_;
        add_table_[a * q + b] = from_coeffs(sum);
        mul_table_[a * q + b] = mul_slow(static_cast<Elem>(a), static_cast<Elem>(b));
      }
  }
}

ResidueRing::Elem ResidueRing::project(Elem a, const ResidueRing& factor) const {
  if (factor.p_ != p_ || !fp::rem(f_, factor.f_, p_).empty()) throw DomainError("not a factor ring");
  fp::Poly c = coeffs(a);
  fp::trim(c);
  fp::Poly r = fp::rem(c, factor.f_, p_);
  r.resize(static_cast<std::size_t>(factor.n_), 0);
  return factor.from_coeffs(r);
}

std::vector<ResidueRing> ResidueRing::factor_rings(std::uint64_t table_cap) const {
  std::vector<ResidueRing> out;
  for (const auto& g : fp::factor(f_, p_)) out.push_back(quotient(p_, g, table_cap));
  return out;
}

std::vector<std::uint64_t> ResidueRing::coeffs(Elem a) const {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(n_));
  std::uint64_t v = a;
  for (int i = 0; i < n_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

ResidueRing::Elem ResidueRing::from_coeffs(const std::vector<std::uint64_t>& c) const {
  std::uint64_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + c[i] % p_;
  return static_cast<Elem>(v);
}

ResidueRing::Elem ResidueRing::add(Elem a, Elem b) const {
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * size_ + b];
  const auto ca = coeffs(a), cb = coeffs(b);
  std::vector<std::uint64_t> s(ca.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (ca[i] + cb[i]) % p_;
  return from_coeffs(s);
}

ResidueRing::Elem ResidueRing::sub(Elem a, Elem b) const {
  const auto ca = coeffs(a), cb = coeffs(b);
  std::vector<std::uint64_t> s(ca.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (ca[i] + p_ - cb[i]) % p_;
  return from_coeffs(s);
}

ResidueRing::Elem ResidueRing::mul(Elem a, Elem b) const {
  if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * size_ + b];
  return mul_slow(a, b);
}

ResidueRing::Elem ResidueRing::mul_slow(Elem a, Elem b) const {
  fp::Poly pa = coeffs(a), pb = coeffs(b);
  fp::trim(pa);
  fp::trim(pb);
  fp::Poly r = fp::rem(fp::mul(pa, pb, p_), f_, p_);
  r.resize(static_cast<std::size_t>(n_), 0);
  return from_coeffs(r);
}

ResidueRing::Elem ResidueRing::reduce(const FieldElement& a) const {
  if (!field_) throw DomainError("residue ring has no number field attached");
  if (!a.field()->same_field(*field_)) throw DomainError("element lies in another field");
  const Integer pz(static_cast<unsigned long>(p_));
  std::vector<std::uint64_t> c;
  for (const auto& q : a.coords()) {
    if (q.get_den() % pz == 0) throw DomainError("p = " + std::to_string(p_) + " divides a denominator");
    Integer num, den;
    mpz_fdiv_r(num.get_mpz_t(), q.get_num_mpz_t(), pz.get_mpz_t());
    mpz_fdiv_r(den.get_mpz_t(), q.get_den_mpz_t(), pz.get_mpz_t());
    c.push_back(static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(num.get_ui()) * fp::inv_mod(den.get_ui(), p_) % p_));
  }
  return from_coeffs(c);
}

// ---------------------------------------------------------------------------

ResidueMat residue_identity(std::size_t n) {
  ResidueMat m{n, std::vector<ResidueRing::Elem>(n * n, 0)};
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

ResidueMat residue_mul(const ResidueRing& ring, const ResidueMat& a, const ResidueMat& b) {
  const std::size_t n = a.n;
  ResidueMat out{n, std::vector<ResidueRing::Elem>(n * n, 0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const auto x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const auto y = b(k, j);
        if (y == 0) continue;
        out(i, j) = ring.add(out(i, j), ring.mul(x, y));
      }
    }
  return out;
}

ResidueRing::Elem residue_det(const ResidueRing& ring, const ResidueMat& a) {
  const std::size_t n = a.n;
  if (n == 1) return a(0, 0);
  if (n == 2) return ring.sub(ring.mul(a(0, 0), a(1, 1)), ring.mul(a(0, 1), a(1, 0)));
  // Laplace expansion along the first row.
  ResidueRing::Elem d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a(0, j) == 0) continue;
    ResidueMat minor{n - 1, {}};
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) minor.e.push_back(a(i, c));
    const auto term = ring.mul(a(0, j), residue_det(ring, minor));
    d = (j % 2 == 0) ? ring.add(d, term) : ring.sub(d, term);
  }
  return d;
}

ResidueMat residue_inverse(const ResidueRing& ring, const ResidueMat& a, std::uint64_t max_order) {
  const ResidueMat id = residue_identity(a.n);
  ResidueMat prev = id;
  ResidueMat cur = a;
  for (std::uint64_t k = 1; k <= max_order; ++k) {
    if (cur == id) return prev;
    prev = cur;
    cur = residue_mul(ring, cur, a);
  }
  throw CapExceeded("element order exceeds " + std::to_string(max_order));
}

ResidueMat reduce_mod(const MatN& g, const ResidueRing& ring) {
  if (!ring.field()) throw DomainError("residue ring has no number field attached");
  if (!g.field()->same_field(*ring.field())) throw DomainError("matrix and residue ring use different fields");
  ResidueMat m{g.size(), {}};
  m.e.reserve(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) m.e.push_back(ring.reduce(g(i, j)));
  return m;
}

ResidueMat project(const ResidueMat& m, const ResidueRing& ring, const ResidueRing& factor) {
  ResidueMat out{m.n, {}};
  out.e.reserve(m.e.size());
  for (const auto x : m.e) out.e.push_back(ring.project(x, factor));
  return out;
}

std::string encode(const ResidueRing& ring, const ResidueMat& m) {
  const unsigned w = ring.limb_bytes();
  std::string out;
  out.reserve(m.e.size() * static_cast<std::size_t>(ring.degree()) * w);
  for (const auto x : m.e) {
    std::uint64_t v = x;
    for (int i = 0; i < ring.degree(); ++i) {
      std::uint64_t c = v % ring.p();
      v /= ring.p();
      for (unsigned b = 0; b < w; ++b) {
        out.push_back(static_cast<char>(c & 0xFF));
        c >>= 8;
      }
    }
  }
  return out;
}

ResidueMat decode(const ResidueRing& ring, std::size_t n, const std::string& bytes) {
  const unsigned w = ring.limb_bytes();
  const auto deg = static_cast<std::size_t>(ring.degree());
  if (bytes.size() != n * n * deg * w) throw DomainError("encoded matrix has the wrong length");
  ResidueMat m{n, {}};
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n * n; ++k) {
    std::vector<std::uint64_t> c(deg);
    for (std::size_t i = 0; i < deg; ++i) {
      std::uint64_t v = 0;
      for (unsigned b = 0; b < w; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos++])) << (8 * b);
      if (v >= ring.p()) throw DomainError("encoded coefficient out of range");
      c[i] = v;
    }
    m.e.push_back(ring.from_coeffs(c));
  }
  return m;
}

}  // namespace trigen
