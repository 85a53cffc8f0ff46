#include "trigen/matgroup.hpp"

#include <sstream>

namespace trigen {

MatN::MatN(FieldPtr field, std::size_t n) : field_(std::move(field)), n_(n) {
  entries_.assign(n * n, field_->zero());
}

MatN MatN::identity(FieldPtr field, std::size_t n) {
  MatN m(field, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field->one();
  return m;
}

MatN MatN::from_rows(const std::vector<std::vector<FieldElement>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty matrix");
  MatN m(rows.front().front().field(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (!rows[i][j].field()->same_field(*m.field_)) throw DomainError("matrix entries from different fields");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

MatN MatN::from_rationals(FieldPtr field, const std::vector<std::vector<Rational>>& rows) {
  MatN m(field, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = field->from_rational(rows[i][j]);
  }
  return m;
}

MatN MatN::diagonal(const std::vector<FieldElement>& diag) {
  if (diag.empty()) throw std::invalid_argument("empty diagonal");
  MatN m(diag.front().field(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

MatN MatN::elementary(FieldPtr field, std::size_t n, std::size_t i, std::size_t j, const FieldElement& x) {
  if (i == j || i >= n || j >= n) throw std::invalid_argument("elementary matrix needs distinct in-range indices");
  MatN m = identity(std::move(field), n);
  m(i, j) = x;
  return m;
}

MatN MatN::operator*(const MatN& b) const {
  if (n_ != b.n_) throw std::invalid_argument("matrix size mismatch");
  MatN out(field_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const FieldElement& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (b(k, j).is_zero()) continue;
        out(i, j) += a * b(k, j);
      }
    }
  return out;
}

MatN MatN::operator*(const FieldElement& c) const {
  MatN out = *this;
  for (auto& e : out.entries_) e *= c;
  return out;
}

MatN MatN::operator-() const {
  MatN out = *this;
  for (auto& e : out.entries_) e = -e;
  return out;
}

bool MatN::operator==(const MatN& b) const { return n_ == b.n_ && entries_ == b.entries_; }

FieldElement MatN::det() const {
  if (n_ == 1) return entries_[0];
  if (n_ == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
  MatN a = *this;
  FieldElement d = field_->one();
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t p = c;
    while (p < n_ && a(p, c).is_zero()) ++p;
    if (p == n_) return field_->zero();
    if (p != c) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(a(p, j), a(c, j));
      d = -d;
    }
    d *= a(c, c);
    const FieldElement inv = a(c, c).inverse();
    for (std::size_t i = c + 1; i < n_; ++i) {
      if (a(i, c).is_zero()) continue;
      const FieldElement f = a(i, c) * inv;
      for (std::size_t j = c; j < n_; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return d;
}

MatN MatN::inverse() const {
  if (n_ == 2) {
    const FieldElement d = det();
    if (d.is_zero()) throw DomainError("singular matrix");
    const FieldElement inv = d.inverse();
    MatN out(field_, 2);
    out(0, 0) = (*this)(1, 1) * inv;
    out(0, 1) = -(*this)(0, 1) * inv;
    out(1, 0) = -(*this)(1, 0) * inv;
    out(1, 1) = (*this)(0, 0) * inv;
    return out;
  }
  MatN a = *this;
  MatN b = identity(field_, n_);
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t p = c;
    while (p < n_ && a(p, c).is_zero()) ++p;
    if (p == n_) throw DomainError("singular matrix");
    if (p != c)
      for (std::size_t j = 0; j < n_; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(b(p, j), b(c, j));
      }
    const FieldElement inv = a(c, c).inverse();
    for (std::size_t j = 0; j < n_; ++j) {
      a(c, j) *= inv;
      b(c, j) *= inv;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      const FieldElement f = a(i, c);
      for (std::size_t j = 0; j < n_; ++j) {
        a(i, j) -= f * a(c, j);
        b(i, j) -= f * b(c, j);
      }
    }
  }
  return b;
}

MatN MatN::pow(long e) const {
  MatN base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
  MatN acc = identity(field_, n_);
  while (k) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return acc;
}

MatN MatN::transpose() const {
  MatN out(field_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool MatN::is_identity() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const FieldElement& e = (*this)(i, j);
      if (i == j ? !e.is_one() : !e.is_zero()) return false;
    }
  return true;
}

bool MatN::is_integral() const {
  for (const auto& e : entries_)
    if (!e.is_integral()) return false;
  return true;
}

std::string MatN::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < n_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < n_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

MatN commutator(const MatN& a, const MatN& b) { return a * b * a.inverse() * b.inverse(); }

MatN conjugate(const MatN& g, const MatN& h) { return g * h * g.inverse(); }

// ---------------------------------------------------------------------------

long Word::length() const {
  long n = 0;
  for (const auto& l : letters_) n += l.exponent < 0 ? -l.exponent : l.exponent;
  return n;
}

Word Word::operator*(const Word& other) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back({it->generator, -it->exponent});
  return Word(std::move(out));
}

Word Word::conjugated_by(const Word& g) const { return g * *this * g.inverse(); }

Word Word::reduced() const {
  std::vector<Letter> out;
  for (const auto& l : letters_) {
    if (l.exponent == 0) continue;
    if (!out.empty() && out.back().generator == l.generator) {
      out.back().exponent += l.exponent;
      if (out.back().exponent == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(std::move(out));
}

std::string Word::to_string() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    os << (i ? " " : "") << letters_[i].generator;
    if (letters_[i].exponent != 1) os << "^" << letters_[i].exponent;
  }
  return os.str();
}

void Alphabet::add(const std::string& name, const MatN& m) { gens_[name] = Entry{m, m.inverse()}; }

const MatN& Alphabet::matrix(const std::string& name) const {
  auto it = gens_.find(name);
  if (it == gens_.end()) throw DomainError("unknown generator '" + name + "'");
  return it->second.m;
}

const MatN& Alphabet::inverse(const std::string& name) const {
  auto it = gens_.find(name);
  if (it == gens_.end()) throw DomainError("unknown generator '" + name + "'");
  return it->second.inv;
}

std::vector<std::string> Alphabet::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : gens_) out.push_back(k);
  return out;
}

MatN word_eval(const Word& w, const Alphabet& alphabet) {
  const auto names = alphabet.names();
  if (names.empty()) throw DomainError("word evaluation over an empty alphabet");
  const MatN& any = alphabet.matrix(names.front());
  MatN acc = MatN::identity(any.field(), any.size());
  for (const auto& l : w.letters()) {
    if (l.exponent == 0) {
      (void)alphabet.matrix(l.generator);
      continue;
    }
    const MatN& base = l.exponent > 0 ? alphabet.matrix(l.generator) : alphabet.inverse(l.generator);
    const long k = l.exponent > 0 ? l.exponent : -l.exponent;
    acc = acc * base.pow(k);
  }
  return acc;
}

// ---------------------------------------------------------------------------

BruhatFactors BruhatFactors::with_convention(WeylConvention c) const {
  if (c == convention || is_borel) {
    BruhatFactors out = *this;
    out.convention = c;
    return out;
  }
  BruhatFactors out = *this;
  out.torus = -torus;
  out.weyl = -weyl;
  out.convention = c;
  return out;
}

BruhatFactors bruhat_decompose(const MatN& g, WeylConvention convention) {
  if (g.size() != 2) throw DomainError("Bruhat decomposition is implemented for 2x2 matrices");
  if (!g.det().is_one()) throw DomainError("Bruhat decomposition needs det = 1");
  const FieldPtr& k = g.field();
  const FieldElement &a = g(0, 0), &b = g(0, 1), &c = g(1, 0), &d = g(1, 1);
  const MatN id = MatN::identity(k, 2);
  BruhatFactors f{id, id, id, id, false, WeylConvention::NegUpper};
  if (c.is_zero()) {
    // g = [[1, b a],[0,1]] diag(a, d) since a d = 1.
    f.is_borel = true;
    f.u1 = MatN::elementary(k, 2, 0, 1, b * a);
    f.torus = MatN::diagonal({a, d});
    f.convention = convention;
    return f;
  }
  const FieldElement cinv = c.inverse();
  f.u1 = MatN::elementary(k, 2, 0, 1, a * cinv);
  f.torus = MatN::diagonal({cinv, c});
  f.weyl = MatN::from_rationals(k, {{0, -1}, {1, 0}});
  f.u2 = MatN::elementary(k, 2, 0, 1, d * cinv);
  return f.with_convention(convention);
}

}  // namespace trigen
