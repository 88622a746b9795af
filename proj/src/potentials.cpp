#include "gvflat/potentials.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <map>
#include <tuple>

#include "gvflat/error.hpp"
#include "gvflat/flatsec.hpp"

namespace gvflat {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
const Complex kI(0.0, 1.0);

void check_v(Complex v) {
  if (!(v.imag() > 0.0)) throw PreconditionError("v_beta needs Im v > 0 for the sigma integrals to converge");
}

void check_degree(int d) {
  if (d < 1) throw PreconditionError("curve degree must be >= 1");
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// (r, n_{g, d/r}) for the divisors r of d with a nonzero invariant.
std::vector<std::pair<int, double>> divisor_weights(const GvTable& gv, int g, int d) {
  std::vector<std::pair<int, double>> out;
  for (int r = 1; r <= d; ++r)
    if (d % r == 0) {
      const long n = gv.get(g, d / r);
      if (n != 0) out.emplace_back(r, static_cast<double>(n));
    }
  return out;
}

// i d/ds (1/r)(2 sin(r s/2))^{2g-2} = i e (2 sin(x/2))^{e-1} cos(x/2), e = 2g - 2, x = r s.
Complex framed_factor(int g, int r, double s) {
  const int e = 2 * g - 2;
  if (e == 0) return 0.0;
  const double x = r * s;
  return kI * static_cast<double>(e) * std::pow(2.0 * std::sin(0.5 * x), e - 1) * std::cos(0.5 * x);
}

// Upper breakpoint past which e^{-s Im v} is negligible at double precision.
double decay_scale(Complex v) { return std::max(64.0, 40.0 / v.imag()); }

// int_0^inf k(s) h(s) ds for a kernel with structure at scale eps near 0.
QuadResult sigma_integral(const ComplexFn& f, double eps, Complex v, const QuadOptions& opts) {
  return integrate_half_line(f, std::min(eps, 1.0) / 8.0, decay_scale(v), opts);
}

// (1/2) sum_r n int K(s) s^p e^{i s v} F_r(s) ds with a real kernel K.
QuadResult framed_with_kernel(int g, int d, const GvTable& gv, Complex v, double eps, int power,
                              const std::function<double(double)>& K, const QuadOptions& opts) {
  const auto terms = divisor_weights(gv, g, d);
  if (terms.empty() || g == 1) return QuadResult{};
  auto f = [&](double s) {
    Complex acc = 0.0;
    for (const auto& [r, n] : terms) acc += n * framed_factor(g, r, s);
    return 0.5 * K(s) * std::pow(s, power) * std::exp(kI * s * v) * acc;
  };
  return sigma_integral(f, eps, v, opts);
}

}  // namespace

// ---------------------------------------------------------------------------

GvDerivativeTable gv_derivatives(const GvTable& gv, int d, Complex v, int g, int j_max) {
  check_degree(d);
  if (g < 1) throw PreconditionError("gv_derivatives needs g >= 1; genus 0 has a principal part");
  if (j_max < 0) throw PreconditionError("j_max must be >= 0");
  const int N = j_max + 2;
  ExactSeries S(N);
  for (int r = 1; r <= d; ++r) {
    if (d % r != 0) continue;
    const long n = gv.get(g, d / r);
    if (n == 0) continue;
    const auto p = taylor_sin_power(r, 2 * g - 2, N);
    ExactSeries term = p.regular;
    term *= GaussianRational(Rational(n) / r);
    S += term;
  }
  // F = i S'; valid to order N - 1 >= j_max.
  ExactSeries F = S.derivative();
  F *= GaussianRational(0, 1);

  GvDerivativeTable out;
  out.g = g;
  out.d = d;
  out.v = v;
  // D_j = sum_k C(j,k) (i)^k v^k F^{(j-k)}(0)
  for (int j = 0; j <= j_max; ++j) {
    std::vector<GaussianRational> poly(static_cast<std::size_t>(j) + 1);
    Rational binom = 1;
    GaussianRational ik(1);
    for (int k = 0; k <= j; ++k) {
      poly[static_cast<std::size_t>(k)] = GaussianRational(binom) * ik * F.derivative_at_zero(j - k);
      binom = binom * (j - k) / (k + 1);
      ik *= GaussianRational(0, 1);
    }
    Complex value = 0.0, vk = 1.0;
    for (const auto& c : poly) {
      value += c.to_complex() * vk;
      vk *= v;
    }
    out.v_poly.push_back(std::move(poly));
    out.values.push_back(value);
  }
  return out;
}

QuadResult framed_potential(int g, int d, const GvTable& gv, Complex v, double eps, const QuadOptions& opts) {
  check_degree(d);
  if (g < 1) throw PreconditionError("framed potential needs g >= 1; use genus0_regularized");
  check_v(v);
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  const QuadResult q = framed_with_kernel(g, d, gv, v, eps, 0, [eps](double s) { return kernel(eps, s); }, opts);
  if (!q.converged) throw ConvergenceError("framed potential quadrature did not converge");
  return q;
}

QuadResult framed_potential_finiteG(int g, int d, const GvTable& gv, Complex v, double eps, Complex G,
                                    const QuadOptions& opts) {
  check_degree(d);
  if (g < 1) throw PreconditionError("finite-G framed potential needs g >= 1");
  check_v(v);
  if (!(G.real() > 0.0)) throw PreconditionError("finite-G framed potential needs Re G > 0");
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");

  const GvTable row = gv.restricted_to_genus(g);
  const int w = std::max(1, (g - 1) * d);
  const LaurentPoly conn = connected_series(row, d, -w, w);
  const LaurentPoly wide = connected_series(row, d, -2 * w, 2 * w);
  if (conn.truncated() || !(wide.rewindow(-w, w) == conn) || wide.terms().size() != conn.terms().size())
    throw WindowError("pairs window [-(g-1)d, (g-1)d] does not hold the support");

  // (-1)^n n P'_{n,d}
  std::vector<std::pair<int, double>> c;
  for (const auto& [n, p] : conn.terms())
    if (n != 0) c.emplace_back(n, ((n % 2) ? -1.0 : 1.0) * n * p.get_d());
  if (c.empty()) return QuadResult{};

  QuadOptions inner = opts;
  inner.rel_tol = std::max(opts.rel_tol / 10.0, 1e-14);
  auto f = [&](double s) {
    Complex sum = 0.0;
    for (const auto& [n, cn] : c) sum += cn * std::exp(-kI * static_cast<double>(n) * s);
    const Complex J = framed_inner_integral(s, G, inner).value;
    return kernel(eps, s) * std::exp(kI * s * (G + v)) * J * sum;
  };
  const QuadResult q = integrate_half_line(f, std::min(eps, 1.0) / 8.0, std::max(64.0, 40.0 / (G + v).imag()), opts);
  if (!q.converged) throw ConvergenceError("finite-G framed potential quadrature did not converge");
  return q;
}

QuadResult genus0_regularized(int d, const GvTable& gv, Complex v, double eps, const QuadOptions& opts) {
  check_degree(d);
  check_v(v);
  const auto terms = divisor_weights(gv, 0, d);
  QuadResult total;
  if (terms.empty()) return total;

  const int N = 40;
  const auto a = taylor_sin_power(1, -2, N);
  for (const auto& [r, n] : terms) {
    const double rr = r;
    FinitePartSpec fp;
    fp.principal = {{-3, Complex(0.0, -2.0 / (rr * rr * rr))}};
    fp.switch_radius = 1.0 / rr;
    fp.regular_near_zero = [&a, rr](double s) {
      // i sum_{k>=2} a_k k x^{k-1}
      const double x = rr * s;
      Complex acc = 0.0;
      for (int k = a.order(); k >= 2; --k) acc = acc * x + a.coeff(k).to_complex() * static_cast<double>(k);
      return kI * acc * x;
    };
    fp.weight = [v](Complex s) { return std::exp(kI * s * v); };
    const double period = 2.0 * kPi / rr;
    const int kmax = static_cast<int>(std::ceil(40.0 / v.imag() / period));
    for (int k = 1; k <= kmax; ++k) fp.interior_poles.push_back(k * period);
    fp.upper_limit = (kmax + 0.5) * period;
    fp.pole_radius = std::min(0.25 * period, 0.5);
    const AnalyticFn f = [rr](Complex s) {
      const Complex x = rr * s;
      const Complex sn = 2.0 * std::sin(0.5 * x);
      return Complex(0.0, -2.0) * std::cos(0.5 * x) / (sn * sn * sn);
    };
    QuadResult q = finite_part_integral(f, fp, eps, opts);
    q.value *= 0.5 * n;
    q.abs_error *= 0.5 * std::abs(n);
    q.l1_norm *= 0.5 * std::abs(n);
    total += q;
  }
  return total;
}

QuadResult unframed_potential(int g, int d, const GvTable& gv, Complex v, double eps, const QuadOptions& opts) {
  check_degree(d);
  if (g < 1) throw PreconditionError("unframed potential needs g >= 1");
  check_v(v);
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  const auto terms = divisor_weights(gv, g, d);
  if (terms.empty()) return QuadResult{};
  const int e = 2 * g - 2;
  auto f = [&](double s) {
    Complex acc = 0.0;
    for (const auto& [r, n] : terms) acc += n / r * std::pow(2.0 * std::sin(0.5 * r * (s - kPi)), e);
    return 0.5 * kernel(eps, s) * std::exp(kI * s * v) * acc;
  };
  const QuadResult q = sigma_integral(f, eps, v, opts);
  if (!q.converged) throw ConvergenceError("unframed potential quadrature did not converge");
  return q;
}

// ---------------------------------------------------------------------------

std::vector<std::tuple<int, int, double>> eps_operator_power(int j) {
  if (j < 0) throw PreconditionError("operator power must be >= 0");
  // (eps^{-1}(d - eps^{-1})) f = d(f/eps); terms keyed (k, m) for eps^m d^k.
  std::map<std::pair<int, int>, double> op{{{0, 0}, 1.0}};
  for (int step = 0; step < j; ++step) {
    std::map<std::pair<int, int>, double> next;
    for (const auto& [km, c] : op) {
      const auto [k, m] = km;
      // d(c eps^{m-1} f^{(k)}) = c (m-1) eps^{m-2} f^{(k)} + c eps^{m-1} f^{(k+1)}
      if (m - 1 != 0) next[{k, m - 2}] += c * (m - 1);
      next[{k + 1, m - 1}] += c;
    }
    op = std::move(next);
  }
  std::vector<std::tuple<int, int, double>> out;
  for (const auto& [km, c] : op)
    if (c != 0.0) out.emplace_back(km.first, km.second, c);
  return out;
}

std::vector<double> fornberg_weights(int k, double x0, const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  if (k < 0 || k >= n) throw PreconditionError("need more nodes than the derivative order");
  // Fornberg (1988): C[i][m] weights for derivative m at node i.
  std::vector<std::vector<double>> C(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(k) + 1));
  double c1 = 1.0, c4 = nodes[0] - x0;
  C[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, k);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int jj = 0; jj < i; ++jj) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(jj)];
      c2 *= c3;
      if (jj == i - 1) {
        for (int m = mn; m >= 1; --m)
          C[i][m] = c1 * (m * C[i - 1][m - 1] - c5 * C[i - 1][m]) / c2;
        C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
      }
      for (int m = mn; m >= 1; --m) C[jj][m] = (c4 * C[jj][m] - m * C[jj][m - 1]) / c3;
      C[jj][0] = c4 * C[jj][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w;
  for (int i = 0; i < n; ++i) w.push_back(C[i][k]);
  return w;
}

QuadResult apply_L(int j, int g, int d, const GvTable& gv, Complex v, double eps, LMode mode,
                   const QuadOptions& opts) {
  check_degree(d);
  if (g < 1) throw PreconditionError("apply_L needs g >= 1");
  if (j < 0) throw PreconditionError("operator power must be >= 0");
  check_v(v);
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
  if (j == 0) return framed_potential(g, d, gv, v, eps, opts);

  switch (mode) {
    case LMode::Analytic:
      return framed_with_kernel(g, d, gv, v, eps, 0, [j, eps](double s) { return kernel_deriv(j, eps, s); }, opts);
    case LMode::Lifted:
      return framed_with_kernel(g, d, gv, v, eps, 0, [j, eps](double s) { return lifted_kernel(j, eps, s); }, opts);
    case LMode::Numeric:
      break;
  }

  // P(e) = (1/2) sum int kappa_e s^j e^{i s v} F ds, then the eps operator
  // by a 9-point stencil; a 7-point stencil on the inner nodes gives the
  // truncation estimate.
  const int m = 4;
  const double h = eps / 8.0;
  std::vector<double> nodes;
  std::vector<QuadResult> P;
  for (int i = -m; i <= m; ++i) {
    const double e = eps + i * h;
    if (!(e > 0.0)) throw PreconditionError("finite-difference stencil leaves eps > 0");
    nodes.push_back(e);
    P.push_back(framed_with_kernel(g, d, gv, v, e, j, [e](double s) { return kernel(e, s); }, opts));
  }
  const std::vector<double> inner_nodes(nodes.begin() + 1, nodes.end() - 1);
  QuadResult out;
  Complex coarse = 0.0;
  for (const auto& [k, p, c] : eps_operator_power(j)) {
    const double scale = c * std::pow(eps, p);
    const auto w = fornberg_weights(k, eps, nodes);
    const auto wi = fornberg_weights(k, eps, inner_nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      out.value += scale * w[i] * P[i].value;
      out.abs_error += std::abs(scale * w[i]) * P[i].abs_error;
    }
    for (std::size_t i = 0; i < inner_nodes.size(); ++i) coarse += scale * wi[i] * P[i + 1].value;
  }
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
    throw PreconditionError("finite-difference step underflow");
  out.abs_error += std::abs(out.value - coarse);
  for (const auto& q : P) {
    out.evals += q.evals;
    out.converged = out.converged && q.converged;
  }
  return out;
}

PotentialGrid apply_L_grid(int j, int g, int d, const GvTable& gv, Complex v, const std::vector<double>& eps_grid,
                           LMode mode, int threads, const QuadOptions& opts) {
  PotentialGrid out;
  out.g = g;
  out.d = d;
  out.v = v;
  out.framed = true;
  out.j = j;
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] < eps_grid[i - 1])) throw PreconditionError("eps grid must be strictly decreasing");
  out.samples = evaluate_grid(
      [&](double e) {
        const QuadResult q = apply_L(j, g, d, gv, v, e, mode, opts);
        return Sample{e, q.value, q.abs_error};
      },
      eps_grid, threads);
  return out;
}

// ---------------------------------------------------------------------------

double theorem2_factor(int j, Theorem2Convention conv) {
  const double sj = (j % 2) ? -1.0 : 1.0;
  return conv == Theorem2Convention::Printed ? -sj / 4.0 : sj / 4.0;
}

Complex theorem2_tower(int j, double eps, const std::vector<Complex>& D, Theorem2Convention conv) {
  const double pref = conv == Theorem2Convention::Printed ? 1.0 : 1.0 / (2.0 * kPi);
  Complex acc = 0.0;
  for (int h = 0; 2 * h + 1 <= j; ++h) {
    const double sign = ((j + h) % 2) ? -1.0 : 1.0;
    acc += pref * sign * factorial(2 * h) / std::pow(eps, 2 * h + 1) * D.at(static_cast<std::size_t>(j - 2 * h - 1));
  }
  return acc;
}

Theorem2Report theorem2_check(int g, int d, const GvTable& gv, Complex v, int j, const std::vector<double>& eps_grid,
                              Theorem2Convention conv, double tol, int threads) {
  if (g < 2) throw PreconditionError("theorem2_check needs g >= 2");
  if (j < 0) throw PreconditionError("operator power must be >= 0");
  const GvDerivativeTable D = gv_derivatives(gv, d, v, g, j);
  const PotentialGrid grid = apply_L_grid(j, g, d, gv, v, eps_grid, LMode::Analytic, threads);
  std::vector<Sample> rest = grid.samples;
  for (auto& s : rest) s.value -= theorem2_tower(j, s.eps, D.values, conv);
  const RichardsonResult rr = richardson_limit(rest);

  Theorem2Report rep;
  rep.g = g;
  rep.j = j;
  rep.convention = conv;
  rep.limit = rr.limit;
  rep.error = rr.error;
  rep.d_value = D.at(j);
  rep.expected = theorem2_factor(j, conv) * D.at(j);
  rep.tol = tol;
  rep.pass = std::abs(rep.limit - rep.expected) <= tol * std::max(1.0, std::abs(rep.expected));
  rep.samples = grid.samples;
  return rep;
}

Genus1Result genus1_extract(int d, const GvTable& gv, Complex v, const std::vector<double>& eps_grid, int threads) {
  check_degree(d);
  Genus1Result out;
  for (const auto& [r, n] : divisor_weights(gv, 1, d)) out.expected += 0.25 * n / r;
  const auto samples = evaluate_grid(
      [&](double e) {
        const QuadResult q = unframed_potential(1, d, gv, v, e);
        return Sample{e, q.value, q.abs_error};
      },
      eps_grid, threads);
  const RichardsonResult rr = richardson_limit(samples);
  out.limit = rr.limit;
  out.error = rr.error;
  out.samples = samples;
  return out;
}

// ---------------------------------------------------------------------------

ReconstructionResult reconstruct_from_samples(int J, const SampleSource& source) {
  if (J < 0) throw PreconditionError("J must be >= 0");
  ReconstructionResult out;
  for (int j = 0; j <= J; ++j) {
    std::vector<Sample> rest = source(j);
    for (auto& s : rest) s.value -= theorem2_tower(j, s.eps, out.values, Theorem2Convention::Derived);
    // Errors in the recovered values leave a residual tower c_h eps^{-(2h+1)};
    // fitting those powers absorbs it instead of amplifying it.
    RichardsonOptions ro;
    for (int h = 0; 2 * h + 1 <= j; ++h) ro.tower.push_back(-(2 * h + 1));
    RichardsonResult rr;
    try {
      rr = richardson_limit(rest, ro);
    } catch (const ConvergenceError& e) {
      out.complete = false;
      out.stop_reason = "j = " + std::to_string(j) + ": " + e.what();
      return out;
    }
    const double f = theorem2_factor(j, Theorem2Convention::Derived);
    const Complex value = rr.limit / f;
    const double err = rr.error / std::abs(f);
    if (!(err <= 1e-2 * std::max(1.0, std::abs(value)))) {
      out.complete = false;
      out.stop_reason = "j = " + std::to_string(j) + ": error bar " + std::to_string(err) + " too large";
      return out;
    }
    out.values.push_back(value);
    out.errors.push_back(err);
  }
  return out;
}

ReconstructionResult reconstruct_taylor(int g, int d, const GvTable& gv, Complex v, int J,
                                        const std::vector<double>& eps_grid, int threads) {
  if (g < 2) throw PreconditionError("reconstruct_taylor needs g >= 2");
  return reconstruct_from_samples(J, [&](int j) {
    return apply_L_grid(j, g, d, gv, v, eps_grid, LMode::Analytic, threads).samples;
  });
}

SampleSource synthetic_source(const std::vector<Complex>& D, const std::vector<double>& eps_grid, double noise,
                              unsigned seed) {
  return [D, eps_grid, noise, seed](int j) {
    if (j < 0 || j >= static_cast<int>(D.size())) throw PreconditionError("synthetic model has no data for this j");
    std::mt19937 rng(seed + static_cast<unsigned>(j));
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const Complex a(0.37 + 0.11 * j, -0.2), b(-0.5, 0.07 * j);
    std::vector<Sample> out;
    for (double e : eps_grid) {
      Complex val = theorem2_tower(j, e, D, Theorem2Convention::Derived) +
                    theorem2_factor(j, Theorem2Convention::Derived) * D[static_cast<std::size_t>(j)] + a * e +
                    b * e * e;
      if (noise > 0.0) val += noise * Complex(U(rng), U(rng));
      out.push_back({e, val, noise});
    }
    return out;
  };
}

}  // namespace gvflat
