#ifndef GVFLAT_BPS_HPP
#define GVFLAT_BPS_HPP

#include <map>
#include <utility>

#include "gvflat/series.hpp"

namespace gvflat {

/// Gopakumar-Vafa invariants n_{g, d beta0} for g >= 0, d >= 1.
class GvTable {
 public:
  GvTable() = default;

  void set(int g, int d, long n);
  long get(int g, int d) const;
  const std::map<std::pair<int, int>, long>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Largest genus with a nonzero entry (any degree); -1 when empty.
  int g_max() const;
  /// Largest genus with a nonzero entry in degree d; -1 when none.
  int g_max(int d) const;
  int d_max() const;
  /// Row of a fixed genus: d -> n_{g, d beta0}.
  std::map<int, long> genus_row(int g) const;
  /// Keep only the entries of genus g.
  GvTable restricted_to_genus(int g) const;

 private:
  std::map<std::pair<int, int>, long> entries_;  // key (g, d), nonzero values only
};

using PairsKey = std::pair<int, int>;  // (n, d)

/// Connected and disconnected pairs invariants, keyed by (n, d).
struct PairsTable {
  std::map<PairsKey, Rational> connected;
  std::map<PairsKey, Rational> disconnected;
  int max_degree = 0;
  int lo = 0;
  int hi = 0;
};

/// (-1)^{g-1}/r ((-q)^r - 2 + (-q)^{-r})^{g-1}. For g = 0 this is the
/// ascending series sum_{d>=1} (-1)/r * d (-q)^{rd}, cut at the window top
/// and flagged truncated. Throws WindowError when the window cannot hold
/// the exponents +-r(g-1).
LaurentPoly bps_kernel(int g, int r, int lo, int hi);

/// F_{P, d beta0}(q) = sum_g sum_{r | d} n_{g, d/r} bps_kernel(g, r). Terms
/// outside [lo, hi] are cut and flagged.
LaurentPoly connected_series(const GvTable& gv, int d, int lo, int hi);

/// Smallest s >= 0 with n >= -s d on every term of the input.
int minimal_slope(const std::map<PairsKey, Rational>& terms);

/// Exponentiate sum P'_{n,d} q^n x_d. Every returned coefficient with
/// n <= hi + slope (D - d) is exact, where slope = minimal_slope(connected).
/// Inputs must be complete up to that same bound.
std::map<PairsKey, Rational> disconnected_from_connected(const std::map<PairsKey, Rational>& connected, int D, int lo,
                                                         int hi);
/// Inverse of disconnected_from_connected (the constant term 1 is implicit
/// and must not be present with d = 0 unless equal to 1).
std::map<PairsKey, Rational> connected_from_disconnected(const std::map<PairsKey, Rational>& disconnected, int D,
                                                         int lo, int hi);

/// Both tables built from GV input, restricted to the q-window [lo, hi].
PairsTable pairs_from_gv(const GvTable& gv, int D, int lo, int hi);

/// dt(n, d beta0) = sum_{k | n, k | d} n_{0, d/k} / k^2.
Rational dt_torsion(long n, int d, const std::map<int, long>& n0);

/// Disconnected pairs invariant P_{n, d beta0} computed from GV input.
Rational dt_is_pairs(int n, int d, const GvTable& gv);

}  // namespace gvflat

#endif
