#include "gvflat/lattice.hpp"

#include <string>

#include "gvflat/error.hpp"

namespace gvflat {

namespace {

void require_same_rho(std::size_t a, std::size_t b) {
  if (a != b)
    throw PreconditionError("lattice dimension mismatch: rho " + std::to_string(a) +
                            " vs " + std::to_string(b));
}

}  // namespace

LatticeClass::LatticeClass(std::int64_t s_, std::vector<std::int64_t> l_, std::int64_t r_)
    : s(s_), l(std::move(l_)), r(r_) {
  if (l.empty()) throw PreconditionError("curve lattice needs rho >= 1");
}

LatticeClass LatticeClass::rank1(std::int64_t s, std::int64_t d, std::int64_t r) {
  return LatticeClass(s, {d}, r);
}

LatticeClass LatticeClass::structure_sheaf(std::size_t rho) {
  return LatticeClass(0, std::vector<std::int64_t>(rho, 0), 1);
}

LatticeClass LatticeClass::operator-() const {
  LatticeClass out = *this;
  out.s = -s;
  out.r = -r;
  for (auto& x : out.l) x = -x;
  return out;
}

LatticeClass& LatticeClass::operator+=(const LatticeClass& o) {
  require_same_rho(rho(), o.rho());
  s += o.s;
  r += o.r;
  for (std::size_t i = 0; i < l.size(); ++i) l[i] += o.l[i];
  return *this;
}

LatticeClass operator*(std::int64_t k, const LatticeClass& a) {
  LatticeClass out = a;
  out.s *= k;
  out.r *= k;
  for (auto& x : out.l) x *= k;
  return out;
}

Geometry::Geometry(std::vector<double> B_, std::vector<double> omega_, Complex G_)
    : B(std::move(B_)), omega(std::move(omega_)), G(G_) {
  if (B.empty()) throw PreconditionError("geometry needs rho >= 1");
  require_same_rho(B.size(), omega.size());
  for (double w : omega)
    if (!(w > 0.0)) throw PreconditionError("omega entries must be strictly positive");
  if (!(G.real() > 0.0)) throw PreconditionError("Re(G) must be positive");
}

Complex Geometry::v(const std::vector<std::int64_t>& beta) const {
  require_same_rho(rho(), beta.size());
  Complex acc = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i)
    acc += Complex(B[i], omega[i]) * static_cast<double>(beta[i]);
  return acc;
}

std::int64_t skew_pair(const LatticeClass& a, const LatticeClass& b) {
  require_same_rho(a.rho(), b.rho());
  return a.r * b.s - a.s * b.r;
}

int twisted_sign(const LatticeClass& a, const LatticeClass& b) {
  return (skew_pair(a, b) % 2 == 0) ? 1 : -1;
}

CentralValue central_charge(const Geometry& geom, const LatticeClass& a) {
  // -(B + i omega).l, i.e. minus v_l
  return {static_cast<double>(a.s) - geom.v(a.l) + static_cast<double>(a.r) * geom.G};
}

}  // namespace gvflat
