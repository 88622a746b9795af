#include "gvflat/genus0.hpp"

#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <sstream>

#include "gvflat/error.hpp"

namespace gvflat {

namespace {
constexpr double kPi = boost::math::constants::pi<double>();

Rational factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

Rational pow2(int n) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(n));
  return Rational(p);
}
}  // namespace

// ---------------------------------------------------------------------------

SymValue SymValue::term(const Rational& c, int pi_power, int i_power) {
  SymValue out;
  if (sgn(c) == 0) return out;
  SymValue unit;
  unit.terms_[{pi_power, 0}] = c;
  return unit.times(0, i_power);
}

SymValue& SymValue::operator+=(const SymValue& o) {
  for (const auto& [k, c] : o.terms_) {
    auto& slot = terms_[k];
    slot += c;
    if (sgn(slot) == 0) terms_.erase(k);
  }
  return *this;
}

SymValue& SymValue::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

SymValue SymValue::times(int pi_power, int i_power) const {
  SymValue out;
  const int r = ((i_power % 4) + 4) % 4;
  for (const auto& [k, c] : terms_) {
    const int total = k.second + r;  // 0..4
    const int b = total % 2;
    const bool negate = (total / 2) % 2 == 1;
    out.terms_[{k.first + pi_power, b}] += negate ? Rational(-c) : c;
  }
  for (auto it = out.terms_.begin(); it != out.terms_.end();)
    it = sgn(it->second) == 0 ? out.terms_.erase(it) : std::next(it);
  return out;
}

std::complex<double> SymValue::evaluate() const {
  std::complex<double> acc = 0.0;
  for (const auto& [k, c] : terms_)
    acc += c.get_d() * std::pow(kPi, k.first) * (k.second ? std::complex<double>(0, 1) : std::complex<double>(1));
  return acc;
}

std::string SymValue::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    if (k.first != 0) os << "*pi^" << k.first;
    if (k.second) os << "*i";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

void FormalBiSeries::add(int lambda_power, int q_power, const SymValue& c) {
  if (c.is_zero()) return;
  auto& slot = terms_[{lambda_power, q_power}];
  slot += c;
  if (slot.is_zero()) terms_.erase({lambda_power, q_power});
}

SymValue FormalBiSeries::coeff(int lambda_power, int q_power) const {
  auto it = terms_.find({lambda_power, q_power});
  return it == terms_.end() ? SymValue{} : it->second;
}

FormalBiSeries FormalBiSeries::d_t() const {
  FormalBiSeries out(g_max_, n_q_);
  for (const auto& [k, c] : terms_) {
    if (k.first == 0) continue;
    SymValue d = c.times(1, 0);  // d lambda/dt = 2 pi
    d *= Rational(2 * k.first);
    out.add(k.first - 1, k.second, d);
  }
  return out;
}

FormalBiSeries FormalBiSeries::d_v() const {
  FormalBiSeries out(g_max_, n_q_);
  for (const auto& [k, c] : terms_) {
    SymValue d = c.times(1, 1);
    d *= Rational(2 * k.second);
    out.add(k.first, k.second, d);
  }
  return out;
}

FormalBiSeries FormalBiSeries::scaled(const Rational& c, int pi_power, int i_power) const {
  FormalBiSeries out(g_max_, n_q_);
  for (const auto& [k, v] : terms_) {
    SymValue s = v.times(pi_power, i_power);
    s *= c;
    out.add(k.first, k.second, s);
  }
  return out;
}

std::complex<double> FormalBiSeries::evaluate(double t, std::complex<double> v) const {
  const double lambda = 2.0 * kPi * t;
  const std::complex<double> Q = std::exp(std::complex<double>(0.0, 2.0 * kPi) * v);
  std::complex<double> acc = 0.0;
  for (const auto& [k, c] : terms_) acc += c.evaluate() * std::pow(lambda, k.first) * std::pow(Q, k.second);
  return acc;
}

// ---------------------------------------------------------------------------

Genus0Numeric genus0_potential_numeric(double t, std::complex<double> v, long n0, int K, int N) {
  if (!(v.imag() > 0.0)) throw PreconditionError("genus-0 potential needs Im(v) > 0");
  if (K < 1 || N < 1) throw PreconditionError("truncation bounds must be >= 1");
  const double lambda = 2.0 * kPi * t;
  const std::complex<double> Q = std::exp(std::complex<double>(0.0, 2.0 * kPi) * v);
  const double rho = std::abs(Q);

  std::complex<double> total = 0.0;
  for (int k = K; k >= 1; --k) {
    const double x = lambda / k;
    std::complex<double> inner = 0.0, Qn = 1.0;
    for (int n = 1; n <= N; ++n) {
      Qn *= Q;
      inner += x / (1.0 + (n * x) * (n * x)) * Qn;
    }
    total += inner / (kPi * k);
  }
  // |x/(1 + (n x)^2)| <= |x|; sum_k 1/(pi k^2) <= zeta(2)/pi; sum_{k>K} 1/k^2 <= 1/K.
  const double zeta2 = kPi * kPi / 6.0;
  const double n_tail = std::abs(lambda) * zeta2 / kPi * std::pow(rho, N + 1) / (1.0 - rho);
  const double k_tail = std::abs(lambda) * rho / ((1.0 - rho) * kPi * K);
  const double scale = std::abs(static_cast<double>(n0));
  return {static_cast<double>(n0) * total, scale * (n_tail + k_tail)};
}

FormalBiSeries potential_series(long n0, int g_max, int n_q, const BernoulliProvider& bern) {
  if (g_max < 1 || n_q < 1) throw PreconditionError("potential_series needs g_max >= 1 and n_q >= 1");
  FormalBiSeries out(g_max, n_q);
  if (n0 == 0) return out;
  for (int g = 1; g <= g_max; ++g) {
    const Rational base = Rational(n0) * bern(2 * g) / factorial(2 * g) * pow2(2 * g - 1);
    const auto li = polylog_nonpos(2 * g - 2).series(n_q);
    for (int m = 1; m <= n_q; ++m) out.add(2 * g - 1, m, SymValue::term(base * li[static_cast<std::size_t>(m)], 2 * g - 1));
  }
  return out;
}

FormalBiSeries gv_genus0_series(long n0, int g_max, int n_q, GvVariable var, const BernoulliProvider& bern) {
  if (n_q < 1) throw PreconditionError("gv_genus0_series needs n_q >= 1");
  FormalBiSeries out(g_max, n_q);
  if (n0 == 0) return out;
  for (int g = 2; g <= g_max; ++g) {
    Rational base = Rational(n0) * bern(2 * g) / (2 * g * factorial(2 * g - 2)) * pow2(2 * g - 2);
    if (g % 2 == 0) base = -base;  // (-1)^{g-1}
    const int i_power = var == GvVariable::Imaginary ? 2 * g - 2 : 0;
    const auto li = polylog_nonpos(2 * g - 3).series(n_q);
    for (int m = 1; m <= n_q; ++m)
      out.add(2 * g - 2, m, SymValue::term(base * li[static_cast<std::size_t>(m)], 2 * g - 2, i_power));
  }
  return out;
}

std::string Theorem1Report::first_mismatch() const {
  for (const auto& e : entries)
    if (!e.equal)
      return "(g=" + std::to_string(e.g) + ", m=" + std::to_string(e.m) + "): " + e.potential_side.str() + " vs " +
             e.gv_side.str();
  return "";
}

Theorem1Report theorem1_check(long n0, int g_max, int n_q, GvVariable var, const BernoulliProvider& potential_bernoulli,
                              const BernoulliProvider& gv_bernoulli) {
  if (g_max < 2) throw PreconditionError("theorem1_check needs g_max >= 2");
  // -(1/(2 pi i)) = i/(2 pi)
  const FormalBiSeries lhs = potential_series(n0, g_max, n_q, potential_bernoulli).d_t().scaled(Rational(1, 2), -1, 1);
  const FormalBiSeries rhs = gv_genus0_series(n0, g_max, n_q, var, gv_bernoulli).d_v();
  Theorem1Report report;
  for (int g = 2; g <= g_max; ++g)
    for (int m = 1; m <= n_q; ++m) {
      Theorem1Entry e{g, m, lhs.coeff(2 * g - 2, m), rhs.coeff(2 * g - 2, m), false};
      e.equal = e.potential_side == e.gv_side;
      report.all_equal = report.all_equal && e.equal;
      report.entries.push_back(std::move(e));
    }
  return report;
}

}  // namespace gvflat
