#include <doctest.h>

#include <random>

#include "gvflat/bps.hpp"

using namespace gvflat;

TEST_SUITE("bps") {
  TEST_CASE("kernel examples") {
    const LaurentPoly k13 = bps_kernel(1, 3, -2, 2);
    CHECK(k13.coeff(0) == Rational(1, 3));
    CHECK(k13.terms().size() == 1);

    const LaurentPoly k21 = bps_kernel(2, 1, -3, 3);
    CHECK(k21.coeff(-1) == 1);
    CHECK(k21.coeff(0) == 2);
    CHECK(k21.coeff(1) == 1);
    CHECK(k21.terms().size() == 3);

    const LaurentPoly k01 = bps_kernel(0, 1, 1, 3);
    CHECK(k01.coeff(1) == 1);
    CHECK(k01.coeff(2) == -2);
    CHECK(k01.coeff(3) == 3);
    CHECK(k01.truncated());

    CHECK_THROWS_AS(bps_kernel(3, 2, -3, 3), WindowError);
  }

  TEST_CASE("genus zero kernel matches the geometric series") {
    for (int r = 1; r <= 4; ++r) {
      const int hi = 24;
      const LaurentPoly k = bps_kernel(0, r, 0, hi);
      // -(1/r) sum_d d (-q)^{r d}
      for (int n = 0; n <= hi; ++n) {
        Rational expect = 0;
        if (n > 0 && n % r == 0) {
          const int d = n / r;
          expect = Rational(-d) / r;
          if (n % 2) expect = -expect;
        }
        CHECK(k.coeff(n) == expect);
      }
    }
  }

  TEST_CASE("kernels are palindromic for g >= 1") {
    for (int g = 1; g <= 6; ++g)
      for (int r = 1; r <= 3; ++r) {
        const LaurentPoly k = bps_kernel(g, r, -20, 20);
        CHECK(k == k.reflect());
      }
  }

  TEST_CASE("connected series examples") {
    GvTable a;
    a.set(1, 1, 5);
    const LaurentPoly f1 = connected_series(a, 1, -4, 4);
    CHECK(f1.coeff(0) == 5);
    CHECK(f1.terms().size() == 1);

    GvTable b;
    b.set(2, 1, 1);
    const LaurentPoly f2 = connected_series(b, 2, -4, 4);
    CHECK(f2.coeff(-2) == Rational(-1, 2));
    CHECK(f2.coeff(0) == 1);
    CHECK(f2.coeff(2) == Rational(-1, 2));
    CHECK(f2.terms().size() == 3);

    CHECK(connected_series(GvTable{}, 3, -4, 4).is_zero());
  }

  TEST_CASE("finite exponent support") {
    GvTable gv;
    gv.set(1, 1, 2);
    gv.set(3, 1, -1);
    gv.set(2, 2, 4);
    for (int d = 1; d <= 4; ++d) {
      const LaurentPoly f = connected_series(gv, d, -40, 40);
      if (f.is_zero()) continue;
      CHECK(f.min_exponent() >= -d * (gv.g_max() - 1));
      CHECK(f.max_exponent() <= d * (gv.g_max() - 1));
    }
  }

  TEST_CASE("connected to disconnected") {
    const Rational c(5, 3);
    std::map<PairsKey, Rational> conn{{{0, 1}, c}};
    const auto disc = disconnected_from_connected(conn, 2, -2, 2);
    CHECK(disc.at({0, 1}) == c);
    CHECK(disc.at({0, 2}) == c * c / 2);
    CHECK(disc.size() == 2);

    CHECK(disconnected_from_connected({}, 3, 0, 3).empty());
    CHECK(connected_from_disconnected({}, 3, 0, 3).empty());
    CHECK(connected_from_disconnected(disc, 2, -2, 2) == conn);

    std::map<PairsKey, Rational> bad{{{0, 0}, 2}};
    CHECK_THROWS_AS(connected_from_disconnected(bad, 2, 0, 2), PreconditionError);
  }

  TEST_CASE("round trip on GV input") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> n(-5, 5);
    for (int t = 0; t < 5; ++t) {
      GvTable gv;
      for (int d = 1; d <= 3; ++d)
        for (int g = 0; g <= 2; ++g) gv.set(g, d, n(rng));
      const PairsTable table = pairs_from_gv(gv, 3, -3, 4);
      // Recompute the connected side in the full exact region, then round-trip.
      const int slope = std::max(0, gv.g_max() - 1);
      std::map<PairsKey, Rational> conn;
      for (int d = 1; d <= 3; ++d) {
        const LaurentPoly f = connected_series(gv, d, -slope * d, 4 + slope * (3 - d));
        for (const auto& [e, c] : f.terms()) conn[{e, d}] = c;
      }
      if (minimal_slope(conn) != slope) continue;
      const auto disc = disconnected_from_connected(conn, 3, -3, 4);
      CHECK(connected_from_disconnected(disc, 3, -3, 4) == conn);
      for (const auto& [key, c] : table.disconnected) CHECK(disc.at(key) == c);
    }
  }

  TEST_CASE("torsion DT") {
    const std::map<int, long> n0{{1, 1}};
    CHECK(dt_torsion(7, 1, n0) == 1);
    CHECK(dt_torsion(0, 2, n0) == Rational(1, 4));
    CHECK(dt_torsion(3, 2, {}) == 0);
    const std::map<int, long> conifold{{1, 1}, {2, -3}, {3, 5}, {6, 2}};
    for (long m = -12; m <= 12; ++m)
      for (int d = 1; d <= 6; ++d) CHECK(dt_torsion(m, d, conifold) == dt_torsion(-m, d, conifold));
  }

  TEST_CASE("dt equals disconnected pairs") {
    GvTable gv;
    gv.set(1, 1, 3);
    const Rational c = 3;
    CHECK(dt_is_pairs(0, 1, gv) == c);
    // F_{2 beta0} = 3/2 from the r = 2 cover, plus c^2/2 from the exponential.
    CHECK(dt_is_pairs(0, 2, gv) == c / 2 + c * c / 2);
  }
}
