#ifndef GVFLAT_KERNELQUAD_HPP
#define GVFLAT_KERNELQUAD_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "gvflat/quadrature.hpp"

namespace gvflat {

/// Poisson kernel (1/pi) eps / (eps^2 + sigma^2).
double kernel(double eps, double sigma);

/// d^j/dsigma^j of the kernel, (1/pi) (-1)^j j! Im[(sigma - i eps)^{-j-1}].
double kernel_deriv(int j, double eps, double sigma);

/// sigma^j (sigma^{-1} d/dsigma)^j applied to the kernel:
/// (-1)^j j! (2 sigma)^j eps / (pi (eps^2 + sigma^2)^{j+1}).
double lifted_kernel(int j, double eps, double sigma);

/// (d_eps - eps sigma^{-1} d_sigma - eps^{-1}) kernel, evaluated in closed
/// form term by term. Rejects sigma = 0.
double pde_residual(double eps, double sigma);

using AnalyticFn = std::function<std::complex<double>(std::complex<double>)>;

/// Poisson kernel continued to complex sigma (poles at +-i eps).
std::complex<double> kernel(double eps, std::complex<double> sigma);

/// Laurent principal part of an integrand at sigma = 0, plus optional
/// poles on the positive axis.
struct FinitePartSpec {
  std::vector<std::pair<int, std::complex<double>>> principal;  // (k < 0, a_k)
  /// Optional cancellation-free evaluation of f - principal for
  /// sigma < switch_radius (e.g. from a Taylor expansion).
  ComplexFn regular_near_zero;
  double switch_radius = 0.0;

  /// Poles of f at sigma_k > switch_radius. Each gets its Hadamard finite
  /// part, taken as the mean of the two semicircle indentations of radius
  /// pole_radius. The integral stops at upper_limit, which must then be
  /// finite; its omitted tail is the caller's responsibility.
  std::vector<double> interior_poles;
  double pole_radius = 0.0;
  double upper_limit = INFINITY;

  /// Optional factor applied after the subtraction, w(s) (f(s) - principal(s)).
  AnalyticFn weight;

  std::complex<double> principal_at(double sigma) const;
};

/// int_0^inf kernel(eps, s) w(s) (f(s) - principal(s)) ds. Throws CheckFailure
/// when the subtracted integrand is still not integrable at 0.
QuadResult finite_part_integral(const ComplexFn& f, const FinitePartSpec& fp, double eps, const QuadOptions& opts = {});

/// Same, for f analytic near the axis; required when interior poles are present.
QuadResult finite_part_integral(const AnalyticFn& f, const FinitePartSpec& fp, double eps, const QuadOptions& opts = {});

/// Geometric grid 0.2 * 2^{-i}, i = 0..8.
std::vector<double> epsilon_grid();

struct Sample {
  double eps = 0.0;
  std::complex<double> value = 0.0;
  double error = 0.0;  // quadrature error bar, used as weight
};

enum class Correction { Eps, EpsLog, Eps2, Eps2Log, Eps3, Eps3Log, Eps4, Eps5, Eps6 };

struct RichardsonOptions {
  /// Divergent powers eps^p (p < 0) fitted alongside the limit.
  std::vector<int> tower;
  /// Corrections tried in this order; the fit uses as many as the data
  /// allow while keeping one degree of freedom.
  std::vector<Correction> corrections{Correction::Eps,  Correction::EpsLog, Correction::Eps2, Correction::Eps3,
                                      Correction::Eps3Log, Correction::Eps4, Correction::Eps5};
  int max_corrections = 6;
  double max_condition = 1e13;
};

struct RichardsonResult {
  std::complex<double> limit = 0.0;
  double error = 0.0;
  std::vector<std::complex<double>> tower_coefficients;  // same order as options.tower
  int corrections_used = 0;
  double condition = 0.0;
};

/// Weighted least-squares fit v(eps) = L + sum c_p eps^p + corrections.
/// The error combines the change in L when the last correction is dropped
/// with the fit's own standard error. Throws ConvergenceError for fewer than
/// four samples or an ill-conditioned design.
RichardsonResult richardson_limit(const std::vector<Sample>& samples, const RichardsonOptions& opts = {});

/// Evaluate fn on every grid point using up to `threads` workers.
std::vector<Sample> evaluate_grid(const std::function<Sample(double)>& fn, const std::vector<double>& grid,
                                  int threads = 1);

}  // namespace gvflat

#endif
