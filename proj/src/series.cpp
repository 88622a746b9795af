#include "gvflat/series.hpp"

#include <algorithm>
#include <sstream>

#include "gvflat/lattice.hpp"

namespace gvflat {

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// LaurentPoly

LaurentPoly::LaurentPoly(int lo, int hi) : lo_(lo), hi_(hi) {
  if (lo > hi) throw PreconditionError("empty Laurent window");
}

LaurentPoly LaurentPoly::monomial(const Rational& c, int n, int lo, int hi) {
  LaurentPoly p(lo, hi);
  p.set(n, c);
  return p;
}

LaurentPoly LaurentPoly::neg_q_power(int k, int lo, int hi) {
  return monomial((k % 2 == 0) ? Rational(1) : Rational(-1), k, lo, hi);
}

Rational LaurentPoly::coeff(int n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::set(int n, const Rational& c) {
  if (n < lo_ || n > hi_) {
    if (sgn(c) != 0) truncated_ = true;
    return;
  }
  if (sgn(c) == 0)
    terms_.erase(n);
  else
    terms_[n] = c;
}

void LaurentPoly::prune(int n) {
  auto it = terms_.find(n);
  if (it != terms_.end() && sgn(it->second) == 0) terms_.erase(it);
}

int LaurentPoly::min_exponent() const {
  if (terms_.empty()) throw PreconditionError("zero polynomial has no exponents");
  return terms_.begin()->first;
}

int LaurentPoly::max_exponent() const {
  if (terms_.empty()) throw PreconditionError("zero polynomial has no exponents");
  return terms_.rbegin()->first;
}

namespace {

void require_same_window(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.lo() != b.lo() || a.hi() != b.hi())
    throw PreconditionError("Laurent windows differ: [" + std::to_string(a.lo()) + "," +
                            std::to_string(a.hi()) + "] vs [" + std::to_string(b.lo()) + "," +
                            std::to_string(b.hi()) + "]");
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  require_same_window(*this, o);
  for (const auto& [n, c] : o.terms_) {
    terms_[n] += c;
    prune(n);
  }
  truncated_ = truncated_ || o.truncated_;
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  require_same_window(*this, o);
  for (const auto& [n, c] : o.terms_) {
    terms_[n] -= c;
    prune(n);
  }
  truncated_ = truncated_ || o.truncated_;
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Rational& k) {
  if (sgn(k) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [n, c] : terms_) c *= k;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_window(a, b);
  LaurentPoly out(a.lo(), a.hi());
  std::map<int, Rational> acc;
  for (const auto& [n1, c1] : a.terms_)
    for (const auto& [n2, c2] : b.terms_) acc[n1 + n2] += c1 * c2;
  for (const auto& [n, c] : acc) out.set(n, c);
  out.truncated_ = out.truncated_ || a.truncated_ || b.truncated_;
  return out;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  return lo_ == o.lo_ && hi_ == o.hi_ && terms_ == o.terms_;
}

LaurentPoly LaurentPoly::rewindow(int lo, int hi) const {
  LaurentPoly out(lo, hi);
  for (const auto& [n, c] : terms_) out.set(n, c);
  out.truncated_ = out.truncated_ || truncated_;
  return out;
}

LaurentPoly LaurentPoly::reflect() const {
  LaurentPoly out(-hi_, -lo_);
  for (const auto& [n, c] : terms_) out.set(-n, c);
  out.truncated_ = truncated_;
  return out;
}

std::complex<double> LaurentPoly::evaluate(std::complex<double> q) const {
  std::complex<double> acc = 0.0;
  for (const auto& [n, c] : terms_) acc += c.get_d() * std::pow(q, n);
  return acc;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [n, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    if (n != 0) os << "*q^" << n;
  }
  if (truncated_) os << " [truncated]";
  return os.str();
}

LaurentPoly laurent_add(const LaurentPoly& a, const LaurentPoly& b) { return a + b; }
LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }

LaurentPoly laurent_pow(const LaurentPoly& p, int k) {
  if (k >= 0) {
    LaurentPoly out = LaurentPoly::monomial(1, 0, p.lo(), p.hi());
    LaurentPoly base = p;
    while (k > 0) {
      if (k & 1) out = out * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return out;
  }
  if (k != -1) throw PreconditionError("laurent_pow supports k >= -1 only");
  if (p.is_zero()) throw PreconditionError("cannot invert the zero polynomial");
  if (p.truncated()) throw PreconditionError("cannot invert a truncated polynomial");

  // p = c q^m (1 + a_1 q + ...); 1/p = q^{-m} sum b_k q^k
  const int m = p.min_exponent();
  const int span = p.max_exponent() - m;
  std::vector<Rational> a(static_cast<std::size_t>(span) + 1);
  for (const auto& [n, c] : p.terms()) a[static_cast<std::size_t>(n - m)] = c;
  LaurentPoly out(p.lo(), p.hi());
  const Rational inv0 = 1 / a[0];
  std::vector<Rational> b;
  for (int k = 0; -m + k <= p.hi(); ++k) {
    Rational acc = 0;
    for (int i = 1; i <= std::min(k, span); ++i) acc += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k - i)];
    b.push_back(k == 0 ? inv0 : Rational(-acc * inv0));
    out.set(-m + k, b.back());
  }
  // The series never terminates unless p is a monomial.
  if (span > 0) out.mark_truncated();
  return out;
}

// ---------------------------------------------------------------------------
// GaussianRational

GaussianRational GaussianRational::from_double(std::complex<double> z) {
  return {Rational(z.real()), Rational(z.imag())};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  const Rational den = o.re * o.re + o.im * o.im;
  if (sgn(den) == 0) throw PreconditionError("division by zero Gaussian rational");
  Rational r = (re * o.re + im * o.im) / den;
  Rational i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string GaussianRational::str() const {
  return "(" + re.get_str() + ")+(" + im.get_str() + ")i";
}

// ---------------------------------------------------------------------------
// Taylor helpers

ExactSeries taylor_compose_exp(const GaussianRational& v, int order) {
  ExactSeries s(order);
  const GaussianRational iv = GaussianRational(0, 1) * v;
  GaussianRational term(1);
  s[0] = term;
  for (int k = 1; k <= order; ++k) {
    term *= iv;
    term /= GaussianRational(Rational(k));
    s[k] = term;
  }
  return s;
}

FloatSeries taylor_compose_exp(std::complex<double> v, int order) {
  FloatSeries s(order);
  const std::complex<double> iv = std::complex<double>(0.0, 1.0) * v;
  std::complex<double> term = 1.0;
  s[0] = term;
  for (int k = 1; k <= order; ++k) {
    term *= iv / static_cast<double>(k);
    s[k] = term;
  }
  return s;
}

LaurentTaylor<GaussianRational> taylor_sin_power(int r, int e, int order) {
  if (r <= 0) throw PreconditionError("taylor_sin_power needs r > 0");
  if (e % 2 != 0) throw PreconditionError("taylor_sin_power needs an even exponent");
  // 2 sin(r u / 2) = u * s(u), s(u) = sum_k (-1)^k r^{2k+1} u^{2k} / (4^k (2k+1)!)
  const int shift = (e < 0) ? e : 0;
  const int n = order - shift;  // order of the regular factor
  if (n < 0) throw PreconditionError("taylor_sin_power order below the leading power");
  ExactSeries s(n);
  Rational fact = 1;
  for (int k = 0; 2 * k <= n; ++k) {
    if (k > 0) fact *= (2 * k) * (2 * k + 1);
    mpz_class rp, four;
    mpz_ui_pow_ui(rp.get_mpz_t(), static_cast<unsigned long>(r), static_cast<unsigned long>(2 * k + 1));
    mpz_ui_pow_ui(four.get_mpz_t(), 4, static_cast<unsigned long>(k));
    Rational c = Rational(rp) / (Rational(four) * fact);
    if (k % 2) c = -c;
    s[2 * k] = GaussianRational(c);
  }
  if (e >= 0) {
    // (u s)^e = u^e s^e: shift the power of s up by e.
    ExactSeries se = s.pow(e);
    ExactSeries out(order);
    for (int k = e; k <= order; ++k) out[k] = se[k - e];
    return {0, out};
  }
  return {shift, s.pow(e)};
}

// ---------------------------------------------------------------------------
// TwistedSeries

TwistedSeries::TwistedSeries(int max_degree, int lo, int hi, int slope)
    : D_(max_degree), lo_(lo), hi_(hi), slope_(slope) {
  if (max_degree < 0) throw PreconditionError("degree cutoff must be >= 0");
  if (lo > hi) throw PreconditionError("empty q-window");
  if (slope < 0) throw PreconditionError("slope must be >= 0");
}

void TwistedSeries::add(int d, int n, const Rational& c) {
  if (d < 0) throw PreconditionError("negative curve degree");
  if (n < -slope_ * d)
    throw PreconditionError("term q^" + std::to_string(n) + " x_" + std::to_string(d) +
                            " violates the lower bound n >= -slope*d");
  if (d > D_ || n > cap(d) || sgn(c) == 0) return;
  auto& slot = terms_[{d, n}];
  slot += c;
  if (sgn(slot) == 0) terms_.erase({d, n});
}

Rational TwistedSeries::coeff(int d, int n) const {
  auto it = terms_.find({d, n});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::map<TwistedSeries::Key, Rational> TwistedSeries::window_terms() const {
  std::map<Key, Rational> out;
  for (const auto& [k, c] : terms_)
    if (k.second >= lo_ && k.second <= hi_) out.emplace(k, c);
  return out;
}

bool TwistedSeries::same_shape(const TwistedSeries& o) const {
  return D_ == o.D_ && lo_ == o.lo_ && hi_ == o.hi_ && slope_ == o.slope_;
}

TwistedSeries& TwistedSeries::operator+=(const TwistedSeries& o) {
  if (!same_shape(o)) throw PreconditionError("twisted series shapes differ");
  for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
  return *this;
}

TwistedSeries& TwistedSeries::operator*=(const Rational& k) {
  if (sgn(k) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= k;
  return *this;
}

TwistedSeries operator*(const TwistedSeries& a, const TwistedSeries& b) {
  if (!a.same_shape(b)) throw PreconditionError("twisted series shapes differ");
  TwistedSeries out(a.D_, a.lo_, a.hi_, a.slope_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      const int d = ka.first + kb.first;
      if (d > a.D_) continue;
      const int n = ka.second + kb.second;
      if (n > out.cap(d)) continue;
      // Curve monomials x_{d beta0} = x_{(0, d beta0, 0)}.
      const int sign = twisted_sign(LatticeClass::rank1(0, ka.first, 0), LatticeClass::rank1(0, kb.first, 0));
      out.add(d, n, sign * ca * cb);
    }
  }
  return out;
}

TwistedSeries TwistedSeries::one() const {
  TwistedSeries out(D_, lo_, hi_, slope_);
  out.add(0, 0, 1);
  return out;
}

TwistedSeries twisted_exp(const TwistedSeries& f) {
  for (const auto& [k, c] : f.terms())
    if (k.first == 0) throw PreconditionError("twisted_exp: argument has a degree-0 part");
  // f is nilpotent: f^{D+1} = 0.
  TwistedSeries out = f.one();
  TwistedSeries power = f.one();
  for (int k = 1; k <= f.max_degree(); ++k) {
    power = power * f;
    power *= Rational(1) / k;
    out += power;
  }
  return out;
}

TwistedSeries twisted_log(const TwistedSeries& g) {
  TwistedSeries h(g.max_degree(), g.lo(), g.hi(), g.slope());
  for (const auto& [k, c] : g.terms()) {
    if (k.first == 0) {
      if (k.second != 0 || c != 1) throw PreconditionError("twisted_log: constant term is not 1");
      continue;
    }
    h.add(k.first, k.second, c);
  }
  if (g.coeff(0, 0) != 1) throw PreconditionError("twisted_log: constant term is not 1");
  // log(1 + h) = sum_{k>=1} (-1)^{k+1} h^k / k
  TwistedSeries out(g.max_degree(), g.lo(), g.hi(), g.slope());
  TwistedSeries power = g.one();
  for (int k = 1; k <= g.max_degree(); ++k) {
    power = power * h;
    TwistedSeries term = power;
    term *= Rational((k % 2) ? 1 : -1) / k;
    out += term;
  }
  return out;
}

}  // namespace gvflat
