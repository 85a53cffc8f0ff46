#include "trigen/poly.hpp"

#include <algorithm>
#include <sstream>

namespace trigen {

QPoly::QPoly(QVector coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

QPoly QPoly::from_integers(const ZVector& coeffs) {
  QVector q(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) q[i] = Rational(coeffs[i]);
  return QPoly(std::move(q));
}

QPoly QPoly::monomial(const Rational& c, std::size_t degree) {
  QVector v(degree + 1);
  v[degree] = c;
  return QPoly(std::move(v));
}

void QPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

QPoly QPoly::operator+(const QPoly& o) const {
  QVector r(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
  return QPoly(std::move(r));
}

QPoly QPoly::operator-(const QPoly& o) const {
  QVector r(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
  return QPoly(std::move(r));
}

QPoly QPoly::operator-() const {
  QVector r(coeffs_);
  for (auto& c : r) c = -c;
  return QPoly(std::move(r));
}

QPoly QPoly::operator*(const QPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  QVector r(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return QPoly(std::move(r));
}

QPoly QPoly::operator*(const Rational& c) const {
  QVector r(coeffs_);
  for (auto& x : r) x *= c;
  return QPoly(std::move(r));
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& d) const {
  if (d.is_zero()) throw std::invalid_argument("polynomial division by zero");
  if (degree() < d.degree()) return {QPoly(), *this};
  QVector rem(coeffs_);
  const std::size_t dd = static_cast<std::size_t>(d.degree());
  QVector quot(rem.size() - dd);
  const Rational lead_inv = 1 / d.leading();
  for (std::size_t k = quot.size(); k-- > 0;) {
    const Rational c = rem[k + dd] * lead_inv;
    quot[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) rem[k + j] -= c * d.coeffs_[j];
  }
  rem.resize(dd);
  return {QPoly(std::move(quot)), QPoly(std::move(rem))};
}

QPoly QPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  QVector r(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) r[i - 1] = coeffs_[i] * static_cast<long>(i);
  return QPoly(std::move(r));
}

QPoly QPoly::monic() const {
  if (is_zero()) return {};
  return *this * (1 / leading());
}

Rational QPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

bool QPoly::has_integer_coeffs() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.get_den() == 1; });
}

std::string QPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag.get_str();
    if (i >= 1) os << (i == 0 || mag != 1 ? "*" : "") << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  while (!y.is_zero()) {
    QPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

XGcd xgcd(const QPoly& a, const QPoly& b) {
  QPoly r0 = a, r1 = b;
  QPoly s0 = QPoly::monomial(1, 0), s1;
  QPoly t0, t1 = QPoly::monomial(1, 0);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    QPoly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    QPoly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Rational inv = 1 / r0.leading();
  return {r0 * inv, s0 * inv, t0 * inv};
}

namespace {

Interval mul(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

int sign(const Rational& x) { return sgn(x); }

}  // namespace

Interval eval_interval(const QPoly& p, const Interval& x) {
  Interval acc{0, 0};
  const auto& c = p.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = mul(acc, x);
    acc.lo += c[i];
    acc.hi += c[i];
  }
  return acc;
}

SturmSequence::SturmSequence(const QPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("Sturm sequence of the zero polynomial");
  chain_.push_back(p);
  QPoly d = p.derivative();
  if (d.is_zero()) return;
  chain_.push_back(d);
  while (true) {
    QPoly r = chain_[chain_.size() - 2] % chain_.back();
    if (r.is_zero()) break;
    // Scaling by a positive constant keeps the signs and the numbers small.
    r = -r;
    r = r * (1 / abs(r.leading()));
    chain_.push_back(std::move(r));
  }
}

int SturmSequence::variations(const Rational& x) const {
  int v = 0, last = 0;
  for (const auto& q : chain_) {
    const int s = sign(q.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int SturmSequence::count_roots(const Rational& a, const Rational& b) const {
  return variations(a) - variations(b);
}

int SturmSequence::count_real_roots() const {
  // Sign at -inf of q is (-1)^deg(q) * sign(lead), at +inf sign(lead).
  int vneg = 0, vpos = 0, lneg = 0, lpos = 0;
  for (const auto& q : chain_) {
    const int sp = sign(q.leading());
    const int sn = (q.degree() % 2 == 0) ? sp : -sp;
    if (lpos != 0 && sp != lpos) ++vpos;
    if (lneg != 0 && sn != lneg) ++vneg;
    lpos = sp;
    lneg = sn;
  }
  return vneg - vpos;
}

Rational cauchy_root_bound(const QPoly& p) {
  if (p.degree() < 1) return 1;
  Rational m = 0;
  const Rational lead = abs(p.leading());
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(static_cast<std::size_t>(i))) / lead));
  return m + 1;
}

std::vector<Interval> isolate_real_roots(const QPoly& p) {
  std::vector<Interval> out;
  if (p.degree() < 1) return out;
  const SturmSequence sturm(p);
  const Rational bound = cauchy_root_bound(p);
  struct Pending {
    Rational lo, hi;
    int count;
  };
  std::vector<Pending> stack{{-bound, bound, sturm.count_roots(-bound, bound)}};
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    if (cur.count == 0) continue;
    // Roots are counted on (lo, hi]; split exact rational roots at hi off first.
    if (p.eval(cur.hi) == 0) {
      out.push_back({cur.hi, cur.hi});
      --cur.count;
      if (cur.count == 0) continue;
      // Shrink hi below the exact root without losing other roots.
      Rational h = cur.hi;
      Rational step = (cur.hi - cur.lo) / 2;
      while (true) {
        Rational cand = h - step;
        if (sturm.count_roots(cur.lo, cand) == cur.count && p.eval(cand) != 0) {
          cur.hi = cand;
          break;
        }
        step /= 2;
      }
    }
    if (cur.count == 1) {
      out.push_back({cur.lo, cur.hi});
      continue;
    }
    const Rational mid = (cur.lo + cur.hi) / 2;
    const int left = sturm.count_roots(cur.lo, mid);
    stack.push_back({mid, cur.hi, cur.count - left});
    stack.push_back({cur.lo, mid, left});
  }
  // Open intervals must have p nonzero at both ends for sign-based refinement.
  for (auto& iv : out) {
    if (iv.lo == iv.hi) continue;
    if (p.eval(iv.lo) == 0) {
      // lo is a root that belongs to a neighbouring interval; nudge inward.
      Rational step = iv.width() / 2;
      while (p.eval(iv.lo + step) == 0 || sturm.count_roots(iv.lo + step, iv.hi) != 1) step /= 2;
      iv.lo += step;
    }
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return out;
}

Interval refine_root(const QPoly& p, const Interval& iv) {
  if (iv.lo == iv.hi) return iv;
  const Rational m = iv.mid();
  const int sm = sgn(p.eval(m));
  if (sm == 0) return {m, m};
  const int slo = sgn(p.eval(iv.lo));
  if (slo != sm) return {iv.lo, m};
  return {m, iv.hi};
}

}  // namespace trigen
