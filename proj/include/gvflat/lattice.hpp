#ifndef GVFLAT_LATTICE_HPP
#define GVFLAT_LATTICE_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "gvflat/error.hpp"

namespace gvflat {

using Complex = std::complex<double>;

/// Element (s, l, r) of H0 + N1 + H6: s = ch3, l = curve class in a fixed
/// basis of primitive classes, r = rank.
struct LatticeClass {
  std::int64_t s = 0;
  std::vector<std::int64_t> l;
  std::int64_t r = 0;

  LatticeClass() : l(1, 0) {}
  LatticeClass(std::int64_t s_, std::vector<std::int64_t> l_, std::int64_t r_);
  /// Rank-one curve lattice shorthand: (s, d*beta0, r).
  static LatticeClass rank1(std::int64_t s, std::int64_t d, std::int64_t r);
  /// Class of the structure sheaf, (0, 0, 1).
  static LatticeClass structure_sheaf(std::size_t rho = 1);

  std::size_t rho() const { return l.size(); }

  LatticeClass operator-() const;
  LatticeClass& operator+=(const LatticeClass& o);
  friend LatticeClass operator+(LatticeClass a, const LatticeClass& b) { return a += b; }
  friend LatticeClass operator-(LatticeClass a, const LatticeClass& b) { return a += -b; }
  friend LatticeClass operator*(std::int64_t k, const LatticeClass& a);
  bool operator==(const LatticeClass&) const = default;
};

/// Central charge data. A is fixed to 1.
struct Geometry {
  std::vector<double> B;
  std::vector<double> omega;
  Complex G;

  Geometry(std::vector<double> B_, std::vector<double> omega_, Complex G_);
  std::size_t rho() const { return B.size(); }
  /// v_beta = (B + i omega) . beta for a curve class beta.
  Complex v(const std::vector<std::int64_t>& beta) const;
};

struct CentralValue {
  Complex value;
};

// <(s,l,r),(s',l',r')> = r s' - s r'. Only the H0/H6 pairing survives in
// this sublattice.
std::int64_t skew_pair(const LatticeClass& a, const LatticeClass& b);

/// (-1)^<a,b>, the sign of x_a x_b = sign * x_{a+b}.
int twisted_sign(const LatticeClass& a, const LatticeClass& b);

/// Z(s,l,r) = s - (B + i omega).l + r G.
CentralValue central_charge(const Geometry& geom, const LatticeClass& a);

}  // namespace gvflat

#endif
