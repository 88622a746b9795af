#ifndef GVFLAT_FLATSEC_HPP
#define GVFLAT_FLATSEC_HPP

#include <complex>
#include <functional>
#include <vector>

#include "gvflat/lattice.hpp"
#include "gvflat/quadrature.hpp"
#include "gvflat/series.hpp"

namespace gvflat {

// All ray integrals are over R_{>0} Z, parametrised as z = s Z, s > 0.

/// H(t) = (1/2 pi i) int_ray dz/z t/(z - t) e^{-Z/z}. Throws if t lies on the ray.
QuadResult h_single(Complex Z, Complex t, const QuadOptions& opts = {});

/// Hhat(t) = (1/2 pi i) int_ray dz 2t/(z^2 - t^2) e^{-Z/z}. Throws if t lies on +-ray.
QuadResult hhat_single(Complex Z, Complex t, const QuadOptions& opts = {});

/// Same integrals for real t and Im Z > 0, after turning the ray onto the
/// positive imaginary axis z = i sigma:
///   H    = (1/2 pi i) int_0^inf dsigma/sigma t/(i sigma - t) e^{i Z/sigma}
///   Hhat = -(1/2 pi) int_0^inf dsigma 2t/(sigma^2 + t^2) e^{i Z/sigma}
QuadResult h_single_rotated(Complex Z, double t, const QuadOptions& opts = {});
QuadResult hhat_single_rotated(Complex Z, double t, const QuadOptions& opts = {});

using InnerFn = std::function<Complex(Complex)>;

/// (1/2 pi i) int_ray(Z1) dz/z t/(z - t) e^{-Z1/z} inner(z).
QuadResult h_double(Complex Z1, const InnerFn& inner, Complex t, const QuadOptions& opts = {});
/// (1/2 pi i) int_ray(Z1) dz 2t/(z^2 - t^2) e^{-Z1/z} inner(z).
QuadResult hhat_double(Complex Z1, const InnerFn& inner, Complex t, const QuadOptions& opts = {});

/// Iterated integrals with the inner function H_{Z2} (resp. Hhat_{Z2})
/// evaluated by nested quadrature at ten times the outer accuracy.
QuadResult h_double(Complex Z1, Complex Z2, Complex t, const QuadOptions& opts = {});
QuadResult hhat_double(Complex Z1, Complex Z2, Complex t, const QuadOptions& opts = {});

/// (1/pi) int_0^inf dtau sigma/(1 + (tau sigma)^2) e^{-G/tau}; equals 1/2 at G = 0, sigma > 0.
QuadResult framed_inner_integral(double sigma, Complex G, const QuadOptions& opts = {});

/// Weight of a one- or two-vertex graph after x -> 1: coefficient * cls.
struct WeightValue {
  Rational coefficient;  // dt(a) or dt(a) dt(a') <a, a'>
  LatticeClass cls;      // a
  std::int64_t pair = 0;  // <a, a'> (0 for one vertex)
  int sign = 1;          // (-1)^{<a, a'>} from x_a x_a' = sign * x_{a+a'}
};

WeightValue weight_single(const Rational& dt, const LatticeClass& a);
WeightValue weight_double(const Rational& dt1, const LatticeClass& a, const Rational& dt2, const LatticeClass& a2);

struct SymmetrizationResult {
  Complex lhs;               // sum over signs of W H (scalar multiplying the class)
  Complex rhs;               // W Hhat
  double residual;           // |lhs - rhs|
  double residual_printed;   // |lhs + rhs|, the opposite overall sign
  double quad_error;
};

/// sum_pm W_{pm a} H_{pm a}(t) against +W_a Hhat_a(t), from independent quadratures.
SymmetrizationResult symmetrization_check(const Geometry& geom, const LatticeClass& a, const Rational& dt, Complex t,
                                          const QuadOptions& opts = {});
/// sum over four sign pairs of W_{pm a, pm a'} H_{pm a, pm a'}(t) against W_{a,a'} Hhat_{a,a'}(t).
SymmetrizationResult symmetrization_check(const Geometry& geom, const LatticeClass& a, const Rational& dt,
                                          const LatticeClass& a2, const Rational& dt2, Complex t,
                                          const QuadOptions& opts = {});

/// True when every two-vertex weight among classes with nonzero dt
/// vanishes, which is the case exactly when all their pairings are zero.
bool lagrangian_weights_vanish(const std::vector<std::pair<LatticeClass, Rational>>& classes);

struct VanishingResult {
  std::vector<double> lambdas;
  std::vector<double> magnitudes;
  double slope;  // least-squares slope of log|contribution| against log lambda
};

/// Scales G -> lambda G for one vertex (-n, -beta, r_1) or the two-vertex
/// graph (-n, -beta, r_1) -> -(-n', -beta, r_2) and fits the decay of |H_T(t)|.
VanishingResult vanishing_experiment(int m, const std::vector<int>& ranks, Complex G, const std::vector<double>& lambdas,
                                     Complex v = {0.3, 0.5}, Complex t = {1.0, 0.0}, const QuadOptions& opts = {});

}  // namespace gvflat

#endif
