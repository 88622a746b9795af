#ifndef GVFLAT_QUADRATURE_HPP
#define GVFLAT_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace gvflat {

using ComplexFn = std::function<std::complex<double>(double)>;

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_intervals = 4000;  // cap on the number of subintervals kept
};

struct QuadResult {
  std::complex<double> value = 0.0;
  double abs_error = 0.0;
  double l1_norm = 0.0;  // integral of |f|
  long evals = 0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& o);
};

/// Globally adaptive 31-point Gauss-Kronrod on [a, b] (b may be +infinity):
/// the subinterval with the largest error is bisected until the summed error
/// meets max(abs_tol, rel_tol |I|).
QuadResult integrate_interval(const ComplexFn& f, double a, double b, const QuadOptions& opts = {});

/// Integral over consecutive points p0 < p1 < ... (last may be +infinity),
/// with the points as the initial partition of one global adaptive run.
QuadResult integrate_segments(const ComplexFn& f, const std::vector<double>& points, const QuadOptions& opts = {});

/// Integral over [0, infinity): geometric breakpoints from `small` up to
/// `large` (ratio 2) resolve the scales in between; the tail beyond `large`
/// is handled by the mapping s = large + u/(1-u).
QuadResult integrate_half_line(const ComplexFn& f, double small, double large, const QuadOptions& opts = {});

}  // namespace gvflat

#endif
