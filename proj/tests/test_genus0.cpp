#include <doctest.h>

#include "gvflat/genus0.hpp"
#include "oracle.hpp"

using namespace gvflat;
using oracle::mp;
using oracle::mpc;

namespace {

const double kPi = boost::math::constants::pi<double>();

// Same truncated double sum, in 50 digits.
std::complex<double> oracle_sum(double t, std::complex<double> v, long n0, int K, int N) {
  const mp lambda = 2 * oracle::pi() * mp(t);
  const mpc Q = exp(mpc(0, 2 * oracle::pi()) * mpc(mp(v.real()), mp(v.imag())));
  mpc total = 0;
  for (int k = 1; k <= K; ++k) {
    const mp x = lambda / k;
    mpc inner = 0, Qn = 1;
    for (int n = 1; n <= N; ++n) {
      Qn *= Q;
      inner += mpc(x / (1 + (n * x) * (n * x))) * Qn;
    }
    total += inner / mpc(oracle::pi() * k);
  }
  return oracle::to_double(total * mpc(n0));
}

}  // namespace

TEST_SUITE("genus0") {
  TEST_CASE("numeric potential basics") {
    const std::complex<double> v(0.3, 1.0);
    CHECK(genus0_potential_numeric(0.1, v, 0, 20, 20).value == std::complex<double>(0.0));
    for (double t : {0.05, 0.1, 0.7}) {
      const auto a = genus0_potential_numeric(t, v, 2, 30, 30).value;
      const auto b = genus0_potential_numeric(-t, v, 2, 30, 30).value;
      CHECK(a == -b);
    }
    CHECK_THROWS_AS(genus0_potential_numeric(0.1, {0.3, 0.0}, 1, 10, 10), PreconditionError);
  }

  TEST_CASE("numeric potential against the 50-digit sum") {
    const std::complex<double> v(0.3, 1.0);
    const auto r = genus0_potential_numeric(0.1, v, 1, 60, 60);
    CHECK(std::abs(r.value - oracle_sum(0.1, v, 1, 60, 60)) < 1e-10);
    // Raising the cutoffs moves the value by no more than the reported tail bound.
    const auto big = oracle_sum(0.1, v, 1, 200, 200);
    CHECK(std::abs(r.value - big) <= r.tail_bound);
    CHECK(r.tail_bound < 1e-4);
  }

  TEST_CASE("potential series coefficients") {
    const auto s = potential_series(3, 3, 5);
    for (int m = 1; m <= 5; ++m) CHECK(s.coeff(1, m) == SymValue::term(Rational(3) * 2 / 12, 1));
    CHECK(s.coeff(3, 1) == SymValue::term(Rational(-3) * 8 / 720, 3));
    CHECK(potential_series(0, 4, 4).terms().empty());
    for (const auto& [k, c] : s.terms()) CHECK(k.first % 2 == 1);
  }

  TEST_CASE("GV series coefficients") {
    const auto s = gv_genus0_series(1, 4, 5);
    CHECK(s.coeff(2, 1) == SymValue::term(Rational(4) / 240, 2));
    CHECK(gv_genus0_series(0, 4, 4).terms().empty());
    for (const auto& [k, c] : s.terms()) CHECK(k.first % 2 == 0);
    // Imaginary variable: lambda^{2g-2} picks up i^{2g-2} = (-1)^{g-1}.
    const auto si = gv_genus0_series(1, 4, 5, GvVariable::Imaginary);
    CHECK(si.coeff(2, 3) == s.coeff(2, 3).times(0, 2));
    CHECK(si.coeff(4, 2) == s.coeff(4, 2));
  }

  TEST_CASE("d_v acts as 2 pi i m") {
    const auto s = gv_genus0_series(2, 4, 6);
    const auto d = s.d_v();
    for (const auto& [k, c] : s.terms()) {
      SymValue expect = c.times(1, 1);
      expect *= Rational(2 * k.second);
      CHECK(d.coeff(k.first, k.second) == expect);
    }
    // Numerically against a finite difference in v.
    const std::complex<double> v(0.2, 0.9);
    const double t = 0.013, h = 1e-6;
    const auto fd = (s.evaluate(t, v + h) - s.evaluate(t, v - h)) / (2 * h);
    CHECK(std::abs(fd - d.evaluate(t, v)) < 1e-7 * std::abs(fd));
  }

  TEST_CASE("theorem 1 with u = 2 pi i lambda") {
    const auto rep = theorem1_check(1, 6, 8, GvVariable::Imaginary);
    CHECK(rep.all_equal);
    CHECK(rep.entries.size() == 5 * 8);
    CHECK(rep.first_mismatch().empty());
  }

  TEST_CASE("theorem 1 with real u differs by (-1)^{g-1}") {
    const auto rep = theorem1_check(1, 6, 8, GvVariable::Real);
    CHECK_FALSE(rep.all_equal);
    for (const auto& e : rep.entries) {
      CHECK(e.equal == (e.g % 2 == 1));
      CHECK(e.potential_side == (e.g % 2 ? e.gv_side : e.gv_side.times(0, 2)));
    }
  }

  TEST_CASE("theorem 1 edge cases") {
    CHECK(theorem1_check(0, 6, 8).all_equal);
    CHECK_THROWS_AS(theorem1_check(1, 1, 8), PreconditionError);
  }

  TEST_CASE("a perturbed Bernoulli number is caught at its genus") {
    auto bad = [](int n) { return n == 8 ? bernoulli(8) + Rational(1, 1000) : bernoulli(n); };
    const auto rep = theorem1_check(1, 6, 8, GvVariable::Imaginary, bad);
    CHECK_FALSE(rep.all_equal);
    for (const auto& e : rep.entries) CHECK(e.equal == (e.g != 4));
    CHECK(rep.first_mismatch().rfind("(g=4, m=1)", 0) == 0);
  }

  TEST_CASE("numeric potential matches the lambda series for small t") {
    for (auto [t, v] : {std::pair{0.01, std::complex<double>(0.3, 0.8)}, std::pair{0.0159, std::complex<double>(-0.2, 1.1)}}) {
      const auto num = genus0_potential_numeric(t, v, 1, 4000, 40);
      const auto series = potential_series(1, 8, 16).evaluate(t, v);
      CHECK(std::abs(num.value - series) <= num.tail_bound + 1e-12);
    }
  }
}
