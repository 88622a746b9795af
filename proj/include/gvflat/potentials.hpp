#ifndef GVFLAT_POTENTIALS_HPP
#define GVFLAT_POTENTIALS_HPP

#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gvflat/bps.hpp"
#include "gvflat/kernelquad.hpp"
#include "gvflat/lattice.hpp"
#include "gvflat/series.hpp"

namespace gvflat {

/// Accuracy used by the potentials unless a caller asks otherwise. The
/// epsilon finite differences and extrapolations need near machine-precision
/// integrals.
inline QuadOptions potential_quad_defaults() {
  QuadOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-15;
  return o;
}

/// D_{g,j} = d^j/du^j ( e^{i u v} i d/du sum_{r|d} n_{g,d/r} (1/r)(2 sin(r u/2))^{2g-2} ) at u = 0.
struct GvDerivativeTable {
  int g = 0;
  int d = 0;
  Complex v;
  /// v_poly[j][k] is the exact coefficient of v^k in D_{g,j}.
  std::vector<std::vector<GaussianRational>> v_poly;
  std::vector<Complex> values;  // D_{g,j} at the given v, j = 0..j_max

  int j_max() const { return static_cast<int>(values.size()) - 1; }
  Complex at(int j) const { return values.at(static_cast<std::size_t>(j)); }
};

GvDerivativeTable gv_derivatives(const GvTable& gv, int d, Complex v, int g, int j_max);

/// Framed genus-g potential
/// (1/2) sum_{r|d} n_{g,d/r} int_0^inf kappa_eps e^{i s v} i d/ds (1/r)(2 sin(r s/2))^{2g-2} ds, g >= 1.
QuadResult framed_potential(int g, int d, const GvTable& gv, Complex v, double eps,
                            const QuadOptions& opts = potential_quad_defaults());

/// Finite-G framed potential from the pairs invariants of genus g:
/// sum_n (-1)^n n P'_{n,d} int kappa_eps(s) e^{i s (G + v - n)} J(s, G) ds, where
/// J is framed_inner_integral. The q-window is [-(g-1)d, (g-1)d] and is
/// checked by recomputing on a doubled window.
QuadResult framed_potential_finiteG(int g, int d, const GvTable& gv, Complex v, double eps, Complex G,
                                    const QuadOptions& opts = potential_quad_defaults());

/// Regularised genus-0 term: Hadamard finite part of
/// (1/2) sum_{r|d} n_{0,d/r} int kappa_eps e^{i s v} (i d/ds (1/r)(2 sin(r s/2))^{-2} + 2i/(r^3 s^3)) ds.
/// The real poles at s = 2 pi k / r also receive their finite part; the
/// integral is cut where e^{-s Im v} drops below 1e-17.
QuadResult genus0_regularized(int d, const GvTable& gv, Complex v, double eps,
                              const QuadOptions& opts = potential_quad_defaults());

/// Unframed potential (1/2) sum_{r|d} n_{g,d/r} int kappa_eps e^{i s v} (1/r)(2 sin(r(s - pi)/2))^{2g-2} ds.
QuadResult unframed_potential(int g, int d, const GvTable& gv, Complex v, double eps,
                              const QuadOptions& opts = potential_quad_defaults());

/// How L^j p_g is evaluated, L = -i d_v eps^{-1}(d_eps - eps^{-1}).
enum class LMode {
  Analytic,  // (1/2) int d^j_s kappa F: the closed form as stated for all j
  Lifted,    // (1/2) int s^j (s^{-1} d_s)^j kappa F: what L^j actually produces
  Numeric,   // finite differences in eps, with -i d_v acting as multiplication by s
};

/// L^j p_g at one eps (j = 0 gives p_g).
QuadResult apply_L(int j, int g, int d, const GvTable& gv, Complex v, double eps, LMode mode,
                   const QuadOptions& opts = potential_quad_defaults());

struct PotentialGrid {
  int g = 0;
  int d = 0;
  Complex v;
  bool framed = true;
  int j = 0;  // power of L applied
  std::vector<Sample> samples;
};

PotentialGrid apply_L_grid(int j, int g, int d, const GvTable& gv, Complex v, const std::vector<double>& eps_grid,
                           LMode mode, int threads = 1, const QuadOptions& opts = potential_quad_defaults());

/// Coefficients c_{k,m} of eps^m (d/d eps)^k in (eps^{-1}(d_eps - eps^{-1}))^j.
std::vector<std::tuple<int, int, double>> eps_operator_power(int j);

/// Finite-difference weights for the k-th derivative at x0 on the given nodes.
std::vector<double> fornberg_weights(int k, double x0, const std::vector<double>& nodes);

enum class Theorem2Convention {
  Printed,  // tower sum_h (-1)^{j+h}(2h)!/eps^{2h+1} D_{j-2h-1}, limit -(-1)^j/4 D_j
  Derived,  // tower carries 1/(2 pi), limit +(-1)^j/4 D_j
};

struct Theorem2Report {
  int g = 0;
  int j = 0;
  Theorem2Convention convention = Theorem2Convention::Derived;
  Complex limit;     // extrapolated L^j p_g minus tower
  double error = 0;  // extrapolation error estimate
  Complex expected;  // the convention's multiple of D_{g,j}
  Complex d_value;   // D_{g,j}
  double tol = 1e-4;
  bool pass = false;
  std::vector<Sample> samples;  // L^j p_g on the grid, before subtracting the tower
};

/// Subtracted divergent tower at eps built from D_{g,0..j-1}.
Complex theorem2_tower(int j, double eps, const std::vector<Complex>& D, Theorem2Convention conv);
/// Multiplier c with limit = c D_{g,j}.
double theorem2_factor(int j, Theorem2Convention conv);

/// Compares the extrapolated limit of the analytic L^j p_g minus tower with
/// the convention's multiple of D_{g,j}; pass when within tol (absolute,
/// relative to max(1, |expected|)).
Theorem2Report theorem2_check(int g, int d, const GvTable& gv, Complex v, int j, const std::vector<double>& eps_grid,
                              Theorem2Convention conv, double tol = 1e-4, int threads = 1);

struct Genus1Result {
  Complex limit;
  double error = 0;
  Complex expected;  // (1/4) sum_{r|d} n_{1,d/r}/r
  std::vector<Sample> samples;
};

Genus1Result genus1_extract(int d, const GvTable& gv, Complex v, const std::vector<double>& eps_grid, int threads = 1);

struct ReconstructionResult {
  std::vector<Complex> values;  // recovered D_{g,j}
  std::vector<double> errors;
  bool complete = true;
  std::string stop_reason;
};

/// Samples of L^j p_g on an eps grid, for j = 0, 1, ...
using SampleSource = std::function<std::vector<Sample>(int j)>;

/// Inductive recovery of D_{g,0..J}: at each j the tower built from the
/// values already recovered is subtracted, the remainder is extrapolated to
/// eps -> 0 and divided by the derived factor (-1)^j/4. The tower powers stay
/// in the fit so that errors in earlier values do not leak into the limit.
/// Stops with partial results when an error bar exceeds 1e-2 max(1, |D_j|).
ReconstructionResult reconstruct_from_samples(int J, const SampleSource& source);

/// reconstruct_from_samples fed by the analytic L^j p_g.
ReconstructionResult reconstruct_taylor(int g, int d, const GvTable& gv, Complex v, int J,
                                        const std::vector<double>& eps_grid, int threads = 1);

/// Samples from the asymptotic model tower(eps) + (-1)^j/4 D_j + a_j eps + b_j eps^2,
/// optionally with uniform noise of the given amplitude (recorded as the
/// sample error).
SampleSource synthetic_source(const std::vector<Complex>& D, const std::vector<double>& eps_grid, double noise = 0.0,
                              unsigned seed = 1);

}  // namespace gvflat

#endif
