#include "gvflat/specialfn.hpp"

#include <mutex>

namespace gvflat {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

Polynomial Polynomial::monomial(const Rational& c, int k) {
  std::vector<Rational> v(static_cast<std::size_t>(k) + 1, Rational(0));
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::one_minus_z_pow(int k) {
  Polynomial out({Rational(1)});
  const Polynomial base({Rational(1), Rational(-1)});
  for (int i = 0; i < k; ++i) out = out * base;
  return out;
}

void Polynomial::normalize() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Rational Polynomial::operator[](int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(k)];
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<long>(k));
  return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& k) {
  for (auto& x : c_) x *= k;
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(out));
}

Rational Polynomial::evaluate(const Rational& z) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::complex<double> Polynomial::evaluate(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->get_d();
  return acc;
}

RationalFunction RationalFunction::z_derivative() const {
  // z (N' D - N D') / D^2
  const Polynomial z = Polynomial::monomial(1, 1);
  Polynomial num = numerator.derivative() * denominator + numerator * denominator.derivative() * Rational(-1);
  return {z * num, denominator * denominator};
}

bool RationalFunction::equals(const RationalFunction& o) const {
  return numerator * o.denominator == o.numerator * denominator;
}

std::complex<double> RationalFunction::evaluate(std::complex<double> z) const {
  const std::complex<double> den = denominator.evaluate(z);
  if (den == std::complex<double>(0.0)) throw PreconditionError("rational function evaluated at a pole");
  return numerator.evaluate(z) / den;
}

std::vector<Rational> RationalFunction::series(int n) const {
  const Rational d0 = denominator[0];
  if (sgn(d0) == 0) throw PreconditionError("series expansion at a pole");
  std::vector<Rational> out;
  for (int k = 0; k <= n; ++k) {
    Rational acc = numerator[k];
    for (int i = 1; i <= k; ++i) acc -= denominator[i] * out[static_cast<std::size_t>(k - i)];
    out.push_back(acc / d0);
  }
  return out;
}

// ---------------------------------------------------------------------------

Rational bernoulli(int n) {
  if (n < 0) throw PreconditionError("Bernoulli index must be >= 0");
  if (n == 1) return Rational(-1, 2);
  if (n % 2 != 0) throw PreconditionError("odd Bernoulli index > 1 requested");

  static std::mutex mutex;
  static std::vector<Rational> cache;  // cache[k] = B_k (Akiyama-Tanigawa convention, B_1 = +1/2)
  std::lock_guard<std::mutex> lock(mutex);
  if (static_cast<int>(cache.size()) <= n) {
    // Akiyama-Tanigawa; rebuilt from scratch to index n.
    std::vector<Rational> a(static_cast<std::size_t>(n) + 1);
    cache.assign(static_cast<std::size_t>(n) + 1, Rational(0));
    for (int m = 0; m <= n; ++m) {
      a[static_cast<std::size_t>(m)] = Rational(1) / (m + 1);
      for (int j = m; j >= 1; --j) {
        auto& aj1 = a[static_cast<std::size_t>(j - 1)];
        aj1 = j * (aj1 - a[static_cast<std::size_t>(j)]);
      }
      cache[static_cast<std::size_t>(m)] = a[0];
    }
  }
  return cache[static_cast<std::size_t>(n)];
}

Rational zeta_even(int s) {
  if (s < 2 || s % 2 != 0) throw PreconditionError("zeta_even needs an even argument >= 2");
  const int m = s / 2;
  // zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!)
  mpz_class two_pow, fact;
  mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(s));
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(s));
  Rational c = bernoulli(s) * Rational(two_pow) / (2 * Rational(fact));
  if (m % 2 == 0) c = -c;
  return c;
}

RationalFunction polylog_nonpos(int p) {
  if (p < 0) throw PreconditionError("polylog_nonpos needs p >= 0");
  // N_0 = z; N_k = z (N_{k-1}' (1 - z) + k N_{k-1}), denominator (1 - z)^{k+1}
  const Polynomial z = Polynomial::monomial(1, 1);
  const Polynomial one_minus_z({Rational(1), Rational(-1)});
  Polynomial num = z;
  for (int k = 1; k <= p; ++k) num = z * (num.derivative() * one_minus_z + num * Rational(k));
  return {num, Polynomial::one_minus_z_pow(p + 1)};
}

std::complex<double> polylog_eval(int p, std::complex<double> z) {
  if (z == std::complex<double>(1.0)) throw PreconditionError("Li_{-p} has a pole at z = 1");
  return polylog_nonpos(p).evaluate(z);
}

}  // namespace gvflat
