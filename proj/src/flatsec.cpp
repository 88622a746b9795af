#include "gvflat/flatsec.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <limits>

#include "gvflat/error.hpp"

namespace gvflat {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
const Complex kI(0.0, 1.0);
const Complex kTwoPiI(0.0, 2.0 * kPi);

void check_nonzero(Complex Z) {
  if (Z == Complex(0.0)) throw PreconditionError("central value must be nonzero");
}

bool on_positive_ray(Complex w) {
  return w.real() > 0.0 && std::abs(w.imag()) <= 1e-12 * std::abs(w);
}

// Integral over s in (0, inf) with geometric breakpoints covering [small,
// large] and extra breakpoints at the given locations.
QuadResult half_line(const ComplexFn& f, double small, double large, std::vector<double> extra,
                     const QuadOptions& opts) {
  std::vector<double> pts{0.0};
  for (double x = small; x < large; x *= 2.0) pts.push_back(x);
  pts.push_back(large);
  for (double e : extra)
    if (e > 0.0 && std::isfinite(e)) pts.push_back(e);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return b - a <= 1e-14 * std::max(1.0, b); }),
            pts.end());
  pts.push_back(std::numeric_limits<double>::infinity());
  return integrate_segments(f, pts, opts);
}

// Below s = 1/600, e^{-1/s} underflows relative to anything else in the integrand.
constexpr double kSMin = 1.0 / 600.0;

double ray_small(Complex w) { return std::clamp(std::abs(w) / 16.0, 4.0 * kSMin, 0.02); }
double ray_large(Complex w) { return std::max(64.0, 64.0 * std::abs(w)); }

QuadOptions tighter(const QuadOptions& opts) {
  QuadOptions inner = opts;
  inner.rel_tol = opts.rel_tol / 10.0;
  inner.abs_tol = opts.abs_tol / 10.0;
  return inner;
}

}  // namespace

QuadResult h_single(Complex Z, Complex t, const QuadOptions& opts) {
  check_nonzero(Z);
  const Complex w = t / Z;
  if (on_positive_ray(w)) throw PreconditionError("t lies on the integration ray");
  auto f = [&](double s) { return t / (s * Z - t) * std::exp(-1.0 / s) / (s * kTwoPiI); };
  return half_line(f, ray_small(w), ray_large(w), {w.real()}, opts);
}

QuadResult hhat_single(Complex Z, Complex t, const QuadOptions& opts) {
  check_nonzero(Z);
  const Complex w = t / Z;
  if (on_positive_ray(w) || on_positive_ray(-w)) throw PreconditionError("t lies on the integration ray");
  auto f = [&](double s) { return Z * 2.0 * t / (s * s * Z * Z - t * t) * std::exp(-1.0 / s) / kTwoPiI; };
  return half_line(f, ray_small(w), ray_large(w), {std::abs(w.real())}, opts);
}

QuadResult h_single_rotated(Complex Z, double t, const QuadOptions& opts) {
  if (!(Z.imag() > 0.0)) throw PreconditionError("rotated contour needs Im Z > 0");
  auto f = [&](double s) { return t / (kI * s - t) * std::exp(kI * Z / s) / (s * kTwoPiI); };
  const double small = std::min({std::abs(t), Z.imag(), 1.0}) / 16.0;
  const double large = 64.0 * std::max({std::abs(t), std::abs(Z), 1.0});
  return half_line(f, small, large, {}, opts);
}

QuadResult hhat_single_rotated(Complex Z, double t, const QuadOptions& opts) {
  if (!(Z.imag() > 0.0)) throw PreconditionError("rotated contour needs Im Z > 0");
  auto f = [&](double s) { return -2.0 * t / (s * s + t * t) * std::exp(kI * Z / s) / (2.0 * kPi); };
  const double small = std::min({std::abs(t), Z.imag(), 1.0}) / 16.0;
  const double large = 64.0 * std::max({std::abs(t), std::abs(Z), 1.0});
  return half_line(f, small, large, {}, opts);
}

QuadResult h_double(Complex Z1, const InnerFn& inner, Complex t, const QuadOptions& opts) {
  check_nonzero(Z1);
  const Complex w = t / Z1;
  if (on_positive_ray(w)) throw PreconditionError("t lies on the integration ray");
  auto f = [&](double s) {
    if (s < kSMin) return Complex(0.0);
    return t / (s * Z1 - t) * std::exp(-1.0 / s) * inner(s * Z1) / (s * kTwoPiI);
  };
  return half_line(f, ray_small(w), ray_large(w), {w.real()}, opts);
}

QuadResult hhat_double(Complex Z1, const InnerFn& inner, Complex t, const QuadOptions& opts) {
  check_nonzero(Z1);
  const Complex w = t / Z1;
  if (on_positive_ray(w) || on_positive_ray(-w)) throw PreconditionError("t lies on the integration ray");
  auto f = [&](double s) {
    if (s < kSMin) return Complex(0.0);
    return Z1 * 2.0 * t / (s * s * Z1 * Z1 - t * t) * std::exp(-1.0 / s) * inner(s * Z1) / kTwoPiI;
  };
  return half_line(f, ray_small(w), ray_large(w), {std::abs(w.real())}, opts);
}

namespace {

void check_rays_apart(Complex Z1, Complex Z2, bool both_signs) {
  const Complex w = Z2 / Z1;
  if (on_positive_ray(w) || (both_signs && on_positive_ray(-w)))
    throw PreconditionError("integration rays collide");
}

}  // namespace

QuadResult h_double(Complex Z1, Complex Z2, Complex t, const QuadOptions& opts) {
  check_nonzero(Z2);
  check_rays_apart(Z1, Z2, false);
  const QuadOptions in = tighter(opts);
  double inner_err = 0.0;
  bool inner_ok = true;
  auto inner = [&](Complex z) {
    const QuadResult r = h_single(Z2, z, in);
    inner_err = std::max(inner_err, r.abs_error);
    inner_ok = inner_ok && r.converged;
    return r.value;
  };
  QuadResult out = h_double(Z1, InnerFn(inner), t, opts);
  out.converged = out.converged && inner_ok;
  return out;
}

QuadResult hhat_double(Complex Z1, Complex Z2, Complex t, const QuadOptions& opts) {
  check_nonzero(Z2);
  check_rays_apart(Z1, Z2, true);
  const QuadOptions in = tighter(opts);
  bool inner_ok = true;
  auto inner = [&](Complex z) {
    const QuadResult r = hhat_single(Z2, z, in);
    inner_ok = inner_ok && r.converged;
    return r.value;
  };
  QuadResult out = hhat_double(Z1, InnerFn(inner), t, opts);
  out.converged = out.converged && inner_ok;
  return out;
}

QuadResult framed_inner_integral(double sigma, Complex G, const QuadOptions& opts) {
  if (!(sigma > 0.0)) throw PreconditionError("framed inner integral needs sigma > 0");
  if (G.real() < 0.0) throw PreconditionError("framed inner integral needs Re G >= 0");
  // x = tau sigma: (1/pi) int_0^inf dx/(1 + x^2) e^{-G sigma / x}
  const Complex a = G * sigma;
  auto f = [&](double x) { return std::exp(-a / x) / (kPi * (1.0 + x * x)); };
  const double small = std::min(1.0, std::abs(a) > 0.0 ? std::abs(a) : 1.0) / 16.0;
  return half_line(f, small, 64.0 * std::max(1.0, std::abs(a)), {}, opts);
}

// ---------------------------------------------------------------------------

WeightValue weight_single(const Rational& dt, const LatticeClass& a) { return {dt, a, 0, 1}; }

WeightValue weight_double(const Rational& dt1, const LatticeClass& a, const Rational& dt2, const LatticeClass& a2) {
  const std::int64_t pair = skew_pair(a, a2);
  return {dt1 * dt2 * Rational(static_cast<long>(pair)), a, pair, twisted_sign(a, a2)};
}

SymmetrizationResult symmetrization_check(const Geometry& geom, const LatticeClass& a, const Rational& dt, Complex t,
                                          const QuadOptions& opts) {
  const Complex Z = central_charge(geom, a).value;
  const double c = dt.get_d();
  // W_{-a} = dt(-a) (-a) with dt(-a) = dt(a): coefficient of a is -dt.
  const QuadResult hp = h_single(Z, t, opts);
  const QuadResult hm = h_single(-Z, t, opts);
  const QuadResult hh = hhat_single(Z, t, opts);
  SymmetrizationResult r;
  r.lhs = c * (hp.value - hm.value);
  r.rhs = c * hh.value;
  r.residual = std::abs(r.lhs - r.rhs);
  r.residual_printed = std::abs(r.lhs + r.rhs);
  r.quad_error = std::abs(c) * (hp.abs_error + hm.abs_error + hh.abs_error);
  return r;
}

SymmetrizationResult symmetrization_check(const Geometry& geom, const LatticeClass& a, const Rational& dt,
                                          const LatticeClass& a2, const Rational& dt2, Complex t,
                                          const QuadOptions& opts) {
  const Complex Z1 = central_charge(geom, a).value;
  const Complex Z2 = central_charge(geom, a2).value;
  SymmetrizationResult r;
  r.lhs = 0.0;
  r.quad_error = 0.0;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      // W_{s1 a, s2 a'} = dt dt' <s1 a, s2 a'> (s1 a): coefficient of a is s2 W_{a,a'}.
      const WeightValue w = weight_double(dt, s1 * a, dt2, s2 * a2);
      const double coeff = w.coefficient.get_d() * s1;
      if (coeff == 0.0) continue;
      const QuadResult h = h_double(double(s1) * Z1, double(s2) * Z2, t, opts);
      r.lhs += coeff * h.value;
      r.quad_error += std::abs(coeff) * h.abs_error;
    }
  const WeightValue w = weight_double(dt, a, dt2, a2);
  r.rhs = 0.0;
  if (sgn(w.coefficient) != 0) {
    const QuadResult hh = hhat_double(Z1, Z2, t, opts);
    r.rhs = w.coefficient.get_d() * hh.value;
    r.quad_error += std::abs(w.coefficient.get_d()) * hh.abs_error;
  }
  r.residual = std::abs(r.lhs - r.rhs);
  r.residual_printed = std::abs(r.lhs + r.rhs);
  return r;
}

bool lagrangian_weights_vanish(const std::vector<std::pair<LatticeClass, Rational>>& classes) {
  for (const auto& [a, da] : classes)
    for (const auto& [b, db] : classes) {
      if (sgn(da) == 0 || sgn(db) == 0) continue;
      if (sgn(weight_double(da, a, db, b).coefficient) != 0) return false;
    }
  return true;
}

VanishingResult vanishing_experiment(int m, const std::vector<int>& ranks, Complex G, const std::vector<double>& lambdas,
                                     Complex v, Complex t, const QuadOptions& opts) {
  if (m != 1 && m != 2) throw PreconditionError("vanishing experiment supports m = 1 or 2");
  if (static_cast<int>(ranks.size()) != m) throw PreconditionError("need one rank per vertex");
  for (int r : ranks)
    if (r < 1) throw PreconditionError("ranks must be positive");
  if (!(G.real() > 0.0)) throw PreconditionError("Re G must be positive");
  if (lambdas.size() < 2) throw PreconditionError("need at least two lambda values");

  const int n1 = 1, n2 = 2;
  VanishingResult out;
  for (double lam : lambdas) {
    if (!(lam > 0.0)) throw PreconditionError("lambda must be positive");
    // Z(-n, -beta, r) = -n + v + r G after G -> lambda G.
    const Complex Z1 = -double(n1) + v + double(ranks[0]) * lam * G;
    QuadResult q;
    if (m == 1) {
      q = h_single(Z1, t, opts);
    } else {
      const Complex Z2 = -(-double(n2) + v + double(ranks[1]) * lam * G);
      q = h_double(Z1, Z2, t, opts);
    }
    if (!q.converged) throw ConvergenceError("quadrature failed in the large-volume scan");
    out.lambdas.push_back(lam);
    out.magnitudes.push_back(std::abs(q.value));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(out.lambdas.size());
  for (std::size_t i = 0; i < out.lambdas.size(); ++i) {
    const double x = std::log(out.lambdas[i]), y = std::log(out.magnitudes[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace gvflat
