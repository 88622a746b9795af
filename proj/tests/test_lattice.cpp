#include <doctest.h>

#include <random>

#include "gvflat/lattice.hpp"

using namespace gvflat;

TEST_SUITE("lattice") {
  TEST_CASE("skew pairing values") {
    const auto a = LatticeClass::rank1(-3, -1, 1);
    const auto b = LatticeClass::rank1(-5, -1, 1);
    CHECK(skew_pair(a, b) == -2);
    CHECK(skew_pair(a, a) == 0);
    CHECK(skew_pair(LatticeClass::rank1(1, 0, 0), LatticeClass::structure_sheaf()) == -1);
  }

  TEST_CASE("twisted sign") {
    const auto beta = LatticeClass::rank1(0, 3, 0);
    CHECK(twisted_sign(beta, beta) == 1);
    for (int n : {1, 3, 7}) CHECK(twisted_sign(LatticeClass::rank1(-n, -2, 1), LatticeClass::structure_sheaf()) == -1);
    CHECK(twisted_sign(LatticeClass::rank1(-4, -2, 1), LatticeClass::structure_sheaf()) == 1);
    CHECK(twisted_sign(LatticeClass::rank1(1, 0, 0), LatticeClass::structure_sheaf()) == -1);
  }

  TEST_CASE("rho mismatch is rejected") {
    LatticeClass a(0, {1, 2}, 0);
    CHECK_THROWS_AS(skew_pair(a, LatticeClass::rank1(0, 1, 0)), PreconditionError);
  }

  TEST_CASE("central charge examples") {
    const Geometry geom({0.3}, {1.2}, Complex(2.0, 0.5));
    const Complex v(0.3, 1.2);
    const int n = 4;
    const auto z = central_charge(geom, LatticeClass::rank1(-n, -1, 1)).value;
    CHECK(std::abs(z - (geom.G + v - double(n))) < 1e-15);
    CHECK(std::abs(central_charge(geom, LatticeClass::structure_sheaf()).value - geom.G) < 1e-15);
    const auto t = central_charge(geom, LatticeClass::rank1(-n, -2, 0)).value;
    CHECK(std::abs(t - (2.0 * v - double(n))) < 1e-15);
  }

  TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(Geometry({0.0}, {0.0}, Complex(1.0, 0.0)), PreconditionError);
    CHECK_THROWS_AS(Geometry({0.0}, {1.0}, Complex(0.0, 1.0)), PreconditionError);
  }

  TEST_CASE("random algebraic properties") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> u(-20, 20);
    std::uniform_real_distribution<double> x(0.1, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      const LatticeClass a(u(rng), {u(rng), u(rng)}, u(rng));
      const LatticeClass b(u(rng), {u(rng), u(rng)}, u(rng));
      const LatticeClass c(u(rng), {u(rng), u(rng)}, u(rng));
      CHECK(skew_pair(a, b) == -skew_pair(b, a));
      CHECK(skew_pair(a + c, b) == skew_pair(a, b) + skew_pair(c, b));
      CHECK(skew_pair(3 * a, b) == 3 * skew_pair(a, b));

      const Geometry geom({x(rng) - 1.0, x(rng)}, {x(rng), x(rng)}, Complex(x(rng), x(rng)));
      const Complex zsum = central_charge(geom, a + b).value;
      CHECK(std::abs(zsum - central_charge(geom, a).value - central_charge(geom, b).value) < 1e-10);

      // Effective classes sit in the upper half plane. Curve classes enter
      // Z through -v(l), so the heart-effective curve part is l = -beta.
      const std::int64_t r = std::abs(u(rng)) % 3;
      std::vector<std::int64_t> beta{std::abs(u(rng)) % 4, std::abs(u(rng)) % 4};
      if (r == 0 && beta[0] == 0 && beta[1] == 0) beta[0] = 1;
      const LatticeClass eff(u(rng), {-beta[0], -beta[1]}, r);
      CHECK(central_charge(geom, eff).value.imag() > 0.0);
    }
  }
}
