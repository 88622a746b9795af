#ifndef GVFLAT_SPECIALFN_HPP
#define GVFLAT_SPECIALFN_HPP

#include <complex>
#include <vector>

#include "gvflat/series.hpp"

namespace gvflat {

/// Dense polynomial in z with exact coefficients; coeffs[k] multiplies z^k.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial monomial(const Rational& c, int k);
  /// (1 - z)^k
  static Polynomial one_minus_z_pow(int k);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  Rational operator[](int k) const;
  const std::vector<Rational>& coeffs() const { return c_; }

  Polynomial derivative() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(const Rational& k);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(Polynomial a, const Rational& k) { return a *= k; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  Rational evaluate(const Rational& z) const;
  std::complex<double> evaluate(std::complex<double> z) const;

 private:
  void normalize();
  std::vector<Rational> c_;
};

/// numerator(z) / denominator(z).
struct RationalFunction {
  Polynomial numerator;
  Polynomial denominator;

  /// z d/dz of this function.
  RationalFunction z_derivative() const;
  /// Equality as functions (cross-multiplied).
  bool equals(const RationalFunction& o) const;
  std::complex<double> evaluate(std::complex<double> z) const;
  /// First n+1 Taylor coefficients at z = 0 (requires denominator(0) != 0).
  std::vector<Rational> series(int n) const;
};

/// Bernoulli number B_n (B_1 = -1/2). Odd n > 1 is rejected. Memoized.
Rational bernoulli(int n);

/// Rational c with zeta(s) = c * pi^s, for even s >= 2.
Rational zeta_even(int s);

/// Li_{-p}(z) as N_p(z) / (1 - z)^{p+1}, built from Li_0 = z/(1-z) by
/// repeated z d/dz.
RationalFunction polylog_nonpos(int p);

/// Li_{-p}(z) for z != 1.
std::complex<double> polylog_eval(int p, std::complex<double> z);

}  // namespace gvflat

#endif
