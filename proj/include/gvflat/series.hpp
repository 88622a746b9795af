#ifndef GVFLAT_SERIES_HPP
#define GVFLAT_SERIES_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gvflat/error.hpp"

namespace gvflat {

using Rational = mpq_class;

std::string to_string(const Rational& q);

// ---------------------------------------------------------------------------
// Laurent polynomials in q with a fixed exponent window.

/// Exact Laurent polynomial sum c_n q^n with lo <= n <= hi. Results of
/// arithmetic that would leave the window are cut back to it and flagged.
class LaurentPoly {
 public:
  LaurentPoly(int lo, int hi);

  static LaurentPoly zero(int lo, int hi) { return LaurentPoly(lo, hi); }
  static LaurentPoly monomial(const Rational& c, int n, int lo, int hi);
  /// (-q)^k as a polynomial, i.e. (-1)^k q^k.
  static LaurentPoly neg_q_power(int k, int lo, int hi);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  /// True when some nonzero term was dropped by a window cut.
  bool truncated() const { return truncated_; }
  /// Record that terms beyond the window exist (e.g. a cut-off infinite series).
  void mark_truncated() { truncated_ = true; }

  Rational coeff(int n) const;
  void set(int n, const Rational& c);
  const std::map<int, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Smallest / largest exponent with a nonzero coefficient. Requires !is_zero().
  int min_exponent() const;
  int max_exponent() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Rational& k);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, const Rational& k) { return a *= k; }
  friend LaurentPoly operator*(const Rational& k, LaurentPoly a) { return a *= k; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  /// Same window, same coefficients (truncation flag ignored).
  bool operator==(const LaurentPoly& o) const;

  /// Copy into another window, flagging anything cut off.
  LaurentPoly rewindow(int lo, int hi) const;
  /// q -> 1/q. The window is mirrored.
  LaurentPoly reflect() const;

  std::complex<double> evaluate(std::complex<double> q) const;
  std::string str() const;

 private:
  void prune(int n);

  std::map<int, Rational> terms_;
  int lo_;
  int hi_;
  bool truncated_ = false;
};

LaurentPoly laurent_add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly laurent_mul(const LaurentPoly& a, const LaurentPoly& b);
/// p^k for k >= 0. k == -1 inverts p as a series in ascending powers of q
/// starting from its lowest term, filled up to the window top; p itself must
/// be untruncated.
LaurentPoly laurent_pow(const LaurentPoly& p, int k);

// ---------------------------------------------------------------------------
// Gaussian rationals a + b i.

struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r), im(0) {}
  /// Exact binary value of a double-precision complex number.
  static GaussianRational from_double(std::complex<double> z);

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re, -im}; }
  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;
};

/// Coefficient field traits: exact Gaussian rationals or complex doubles.
template <class T>
struct CoeffTraits;

template <>
struct CoeffTraits<GaussianRational> {
  static GaussianRational from_rational(const Rational& q) { return {q, 0}; }
  static GaussianRational i() { return {0, 1}; }
  static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
  static std::complex<double> to_complex(const GaussianRational& x) { return x.to_complex(); }
};

template <>
struct CoeffTraits<std::complex<double>> {
  static std::complex<double> from_rational(const Rational& q) { return {q.get_d(), 0.0}; }
  static std::complex<double> i() { return {0.0, 1.0}; }
  static bool is_zero(const std::complex<double>& x) { return x == std::complex<double>(0.0); }
  static std::complex<double> to_complex(const std::complex<double>& x) { return x; }
};

// ---------------------------------------------------------------------------
// Truncated Taylor series in u.

/// sum_{k=0}^{N} a_k u^k. Products and compositions truncate at order N.
template <class T>
class TaylorSeries {
 public:
  explicit TaylorSeries(int order) : c_(static_cast<std::size_t>(check(order)) + 1, T{}) {}
  TaylorSeries(int order, std::vector<T> coeffs) : TaylorSeries(order) {
    for (std::size_t k = 0; k < coeffs.size() && k < c_.size(); ++k) c_[k] = std::move(coeffs[k]);
  }
  static TaylorSeries constant(int order, const T& v) {
    TaylorSeries s(order);
    s.c_[0] = v;
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
  T& operator[](int k) { return c_.at(static_cast<std::size_t>(k)); }
  const std::vector<T>& coeffs() const { return c_; }

  TaylorSeries& operator+=(const TaylorSeries& o) {
    same_order(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  TaylorSeries& operator-=(const TaylorSeries& o) {
    same_order(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  TaylorSeries& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend TaylorSeries operator+(TaylorSeries a, const TaylorSeries& b) { return a += b; }
  friend TaylorSeries operator-(TaylorSeries a, const TaylorSeries& b) { return a -= b; }
  friend TaylorSeries operator*(TaylorSeries a, const T& s) { return a *= s; }
  friend TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
    a.same_order(b);
    TaylorSeries out(a.order());
    const int n = a.order();
    for (int i = 0; i <= n; ++i) {
      if (CoeffTraits<T>::is_zero(a.c_[i])) continue;
      for (int j = 0; i + j <= n; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return out;
  }
  bool operator==(const TaylorSeries& o) const { return c_ == o.c_; }

  /// d/du; the top coefficient becomes unknown and is set to zero, so the
  /// result is only trustworthy to order N-1. Callers size N accordingly.
  TaylorSeries derivative() const {
    TaylorSeries out(order());
    for (int k = 1; k <= order(); ++k) out.c_[k - 1] = c_[k] * CoeffTraits<T>::from_rational(k);
    return out;
  }

  /// Multiplicative inverse; requires a nonzero constant term.
  TaylorSeries reciprocal() const {
    if (CoeffTraits<T>::is_zero(c_[0]))
      throw PreconditionError("series reciprocal needs a nonzero constant term");
    TaylorSeries out(order());
    const T inv0 = CoeffTraits<T>::from_rational(1) / c_[0];
    out.c_[0] = inv0;
    for (int k = 1; k <= order(); ++k) {
      T acc{};
      for (int i = 1; i <= k; ++i) acc += c_[i] * out.c_[k - i];
      out.c_[k] = -(acc * inv0);
    }
    return out;
  }

  TaylorSeries pow(int e) const {
    if (e < 0) return reciprocal().pow(-e);
    TaylorSeries out = constant(order(), CoeffTraits<T>::from_rational(1));
    TaylorSeries base = *this;
    while (e > 0) {
      if (e & 1) out = out * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return out;
  }

  /// j-th derivative at u = 0, i.e. j! a_j.
  T derivative_at_zero(int j) const {
    Rational f = 1;
    for (int k = 2; k <= j; ++k) f *= k;
    return (*this)[j] * CoeffTraits<T>::from_rational(f);
  }

  std::complex<double> evaluate(std::complex<double> u) const {
    std::complex<double> acc = 0.0;
    for (int k = order(); k >= 0; --k) acc = acc * u + CoeffTraits<T>::to_complex(c_[k]);
    return acc;
  }

 private:
  static int check(int order) {
    if (order < 0) throw PreconditionError("series order must be >= 0");
    return order;
  }
  void same_order(const TaylorSeries& o) const {
    if (o.order() != order()) throw PreconditionError("series order mismatch");
  }
  std::vector<T> c_;
};

using ExactSeries = TaylorSeries<GaussianRational>;
using FloatSeries = TaylorSeries<std::complex<double>>;

/// u^shift * regular(u); the terms with negative total power form the
/// principal part. Truncated at total power `order`.
template <class T>
struct LaurentTaylor {
  int shift = 0;
  TaylorSeries<T> regular;
  int order() const { return regular.order() + shift; }
  /// Coefficient of u^k (k >= shift).
  T coeff(int k) const {
    const int idx = k - shift;
    if (idx < 0 || idx > regular.order()) return T{};
    return regular[idx];
  }
  /// Pairs (k, a_k) with k < 0 and a_k != 0.
  std::vector<std::pair<int, T>> principal_part() const {
    std::vector<std::pair<int, T>> out;
    for (int k = shift; k < 0; ++k)
      if (!CoeffTraits<T>::is_zero(coeff(k))) out.emplace_back(k, coeff(k));
    return out;
  }
  LaurentTaylor derivative() const {
    // d/du (u^s g) = u^{s-1} (s g + u g')
    TaylorSeries<T> g = regular * CoeffTraits<T>::from_rational(shift);
    TaylorSeries<T> dg = regular.derivative();
    for (int k = regular.order(); k >= 1; --k) g[k] += dg[k - 1];
    return {shift - 1, g};
  }
};

/// e^{i u v} to order N: coefficient of u^k is (i v)^k / k!.
ExactSeries taylor_compose_exp(const GaussianRational& v, int order);
FloatSeries taylor_compose_exp(std::complex<double> v, int order);

/// (2 sin(r u / 2))^e for even e. For e >= 0 the shift is 0; for e < 0 the
/// result has shift e and recorded principal part. Truncated at total
/// power `order`.
LaurentTaylor<GaussianRational> taylor_sin_power(int r, int e, int order);

// ---------------------------------------------------------------------------
// Truncated twisted monomial ring: sum c_{d,n} q^n x_{d beta0}.

/// Terms (d, n) with 0 <= d <= D. Terms carry the invariant n >= -slope * d,
/// and for each degree d only n <= hi + slope * (D - d) is stored. That cut
/// is closed under multiplication: every product term at or below its
/// degree's cap only uses factors at or below theirs, so all stored terms
/// are exact. Coefficients with n in [lo, hi] are the reported window.
class TwistedSeries {
 public:
  using Key = std::pair<int, int>;  // (degree, q-exponent)

  TwistedSeries(int max_degree, int lo, int hi, int slope);

  int max_degree() const { return D_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int slope() const { return slope_; }
  int cap(int d) const { return hi_ + slope_ * (D_ - d); }

  /// Adds c q^n x_{d beta0}; silently ignored above the degree cap or
  /// above D (those terms cannot influence stored coefficients).
  void add(int d, int n, const Rational& c);
  Rational coeff(int d, int n) const;
  const std::map<Key, Rational>& terms() const { return terms_; }
  /// Terms restricted to the reported q-window.
  std::map<Key, Rational> window_terms() const;

  bool same_shape(const TwistedSeries& o) const;
  TwistedSeries& operator+=(const TwistedSeries& o);
  TwistedSeries& operator*=(const Rational& k);
  friend TwistedSeries operator+(TwistedSeries a, const TwistedSeries& b) { return a += b; }
  friend TwistedSeries operator*(const TwistedSeries& a, const TwistedSeries& b);
  bool operator==(const TwistedSeries& o) const { return same_shape(o) && terms_ == o.terms_; }

  TwistedSeries one() const;

 private:
  int D_;
  int lo_;
  int hi_;
  int slope_;
  std::map<Key, Rational> terms_;
};

/// exp(f) for f without degree-0 part.
TwistedSeries twisted_exp(const TwistedSeries& f);
/// log(g) for g whose degree-0 part is exactly 1.
TwistedSeries twisted_log(const TwistedSeries& g);

}  // namespace gvflat

#endif
