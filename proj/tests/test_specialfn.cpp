#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <random>

#include "gvflat/specialfn.hpp"

using namespace gvflat;

namespace {

// Oracle: sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1.
std::vector<Rational> bernoulli_recurrence(int n) {
  std::vector<Rational> B{Rational(1)};
  for (int m = 1; m <= n; ++m) {
    Rational acc = 0;
    mpz_class binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      acc += Rational(binom) * B[static_cast<std::size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    B.push_back(-acc / (m + 1));
  }
  return B;
}

// Oracle: Li_{-p}(z) = sum_{m>=1} m^p z^m.
std::complex<double> li_series(int p, std::complex<double> z) {
  std::complex<double> acc = 0.0, zm = 1.0;
  for (int m = 1; m < 4000; ++m) {
    zm *= z;
    acc += std::pow(double(m), p) * zm;
  }
  return acc;
}

}  // namespace

TEST_SUITE("specialfn") {
  TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(2) == Rational(1, 6));
    CHECK(bernoulli(4) == Rational(-1, 30));
    CHECK(bernoulli(12) == Rational(-691, 2730));
    const auto B = bernoulli_recurrence(40);
    for (int n = 0; n <= 40; n += 2) CHECK(bernoulli(n) == B[static_cast<std::size_t>(n)]);
    CHECK_THROWS_AS(bernoulli(3), PreconditionError);
  }

  TEST_CASE("zeta at even integers") {
    CHECK(zeta_even(2) == Rational(1, 6));
    CHECK(zeta_even(4) == Rational(1, 90));
    for (int s = 2; s <= 30; s += 2) CHECK(sgn(zeta_even(s)) > 0);

    double partial = 0.0;
    for (int k = 1000000; k >= 1; --k) partial += 1.0 / (double(k) * k);
    const double pi = boost::math::constants::pi<double>();
    CHECK(std::abs(partial - zeta_even(2).get_d() * pi * pi) < 1e-6);
    double z6 = 0.0;
    for (int k = 2000; k >= 1; --k) z6 += std::pow(double(k), -6);
    CHECK(std::abs(z6 - zeta_even(6).get_d() * std::pow(pi, 6)) < 1e-12);
  }

  TEST_CASE("polylog closed forms") {
    const Polynomial z = Polynomial::monomial(1, 1);
    const RationalFunction li0 = polylog_nonpos(0);
    CHECK(li0.equals({z, Polynomial::one_minus_z_pow(1)}));
    const RationalFunction li2 = polylog_nonpos(2);
    CHECK(li2.equals({Polynomial({0, 1, 1}), Polynomial::one_minus_z_pow(3)}));
    CHECK(std::abs(polylog_eval(2, -1.0)) < 1e-15);
    CHECK(std::abs(polylog_eval(0, 0.5) - 1.0) < 1e-15);
    CHECK(std::abs(polylog_eval(2, 0.0)) == 0.0);
    CHECK(std::abs(polylog_eval(2, 0.5) - 6.0) < 1e-13);
    CHECK_THROWS_AS(polylog_eval(3, 1.0), PreconditionError);
  }

  TEST_CASE("polylog recurrence and coefficients") {
    for (int p = 0; p <= 12; ++p) {
      const RationalFunction f = polylog_nonpos(p);
      CHECK(f.z_derivative().equals(polylog_nonpos(p + 1)));
      const auto coeffs = f.series(8);
      CHECK(sgn(coeffs[0]) == 0);
      for (int m = 1; m <= 8; ++m) {
        mpz_class mp;
        mpz_ui_pow_ui(mp.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(p));
        CHECK(coeffs[static_cast<std::size_t>(m)] == Rational(mp));
      }
    }
    const std::complex<double> z(0.3, -0.4);
    for (int p = 0; p <= 6; ++p) CHECK(std::abs(polylog_eval(p, z) - li_series(p, z)) < 1e-9 * std::abs(li_series(p, z)));
  }

  TEST_CASE("derivative through the exponential map") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(-0.5, 0.5), y(0.2, 1.0);
    const std::complex<double> two_pi_i(0.0, 2.0 * boost::math::constants::pi<double>());
    for (int t = 0; t < 20; ++t) {
      const std::complex<double> v(x(rng), y(rng));
      const int p = t % 5;
      const double h = 1e-5;
      auto f = [&](std::complex<double> w) { return polylog_eval(p, std::exp(two_pi_i * w)); };
      const std::complex<double> fd = (f(v + h) - f(v - h)) / (2.0 * h);
      const std::complex<double> exact = two_pi_i * polylog_eval(p + 1, std::exp(two_pi_i * v));
      CHECK(std::abs(fd - exact) < 1e-8 * std::max(1.0, std::abs(exact)));
    }
  }
}
