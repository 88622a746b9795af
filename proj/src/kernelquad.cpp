#include "gvflat/kernelquad.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <boost/math/constants/constants.hpp>

#include "gvflat/error.hpp"

namespace gvflat {

namespace {
constexpr double kPi = boost::math::constants::pi<double>();

void check_eps(double eps) {
  if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
}
}  // namespace

double kernel(double eps, double sigma) {
  check_eps(eps);
  return eps / (kPi * (eps * eps + sigma * sigma));
}

double kernel_deriv(int j, double eps, double sigma) {
  check_eps(eps);
  if (j < 0) throw PreconditionError("derivative order must be >= 0");
  const std::complex<double> w = std::pow(std::complex<double>(sigma, -eps), -(j + 1));
  double fact = 1.0;
  for (int k = 2; k <= j; ++k) fact *= k;
  return ((j % 2) ? -1.0 : 1.0) * fact * w.imag() / kPi;
}

double lifted_kernel(int j, double eps, double sigma) {
  check_eps(eps);
  if (j < 0) throw PreconditionError("operator power must be >= 0");
  double fact = 1.0;
  for (int k = 2; k <= j; ++k) fact *= k;
  const double d = eps * eps + sigma * sigma;
  return ((j % 2) ? -1.0 : 1.0) * fact * std::pow(2.0 * sigma, j) * eps / (kPi * std::pow(d, j + 1));
}

double pde_residual(double eps, double sigma) {
  check_eps(eps);
  if (sigma == 0.0) throw PreconditionError("the PDE check is singular at sigma = 0");
  const double d = eps * eps + sigma * sigma;
  const double k_eps = (sigma * sigma - eps * eps) / (kPi * d * d);
  const double k_sigma = -2.0 * eps * sigma / (kPi * d * d);
  return k_eps - eps / sigma * k_sigma - kernel(eps, sigma) / eps;
}

// ---------------------------------------------------------------------------

std::complex<double> FinitePartSpec::principal_at(double sigma) const {
  std::complex<double> acc = 0.0;
  for (const auto& [k, a] : principal) acc += a * std::pow(sigma, k);
  return acc;
}

std::complex<double> kernel(double eps, std::complex<double> sigma) {
  check_eps(eps);
  return eps / (kPi * (eps * eps + sigma * sigma));
}

namespace {

void check_integrable_at_zero(const ComplexFn& residual) {
  // An integrable residual has s * r(s) -> 0; a leftover s^{-1} or worse does not.
  const double s1 = 1e-2, s2 = 1e-3;
  const double m1 = s1 * std::abs(residual(s1));
  const double m2 = s2 * std::abs(residual(s2));
  if (!std::isfinite(m2) || (m2 > 1e-10 && m2 >= 0.3 * m1))
    throw CheckFailure("finite part: integrand minus principal part is not integrable at 0");
}

void check_spec(const FinitePartSpec& fp, double eps) {
  check_eps(eps);
  for (const auto& [k, a] : fp.principal)
    if (k >= 0) throw PreconditionError("principal part exponents must be negative");
}

}  // namespace

QuadResult finite_part_integral(const ComplexFn& f, const FinitePartSpec& fp, double eps, const QuadOptions& opts) {
  check_spec(fp, eps);
  if (!fp.interior_poles.empty()) throw PreconditionError("interior poles need an analytic integrand");
  auto residual = [&](double s) -> std::complex<double> {
    if (fp.regular_near_zero && s < fp.switch_radius) return fp.regular_near_zero(s);
    return f(s) - fp.principal_at(s);
  };
  check_integrable_at_zero(residual);
  auto integrand = [&](double s) {
    const std::complex<double> k = kernel(eps, s) * residual(s);
    return fp.weight ? fp.weight(s) * k : k;
  };
  if (std::isfinite(fp.upper_limit)) {
    std::vector<double> pts{0.0};
    for (double x = std::min(eps, 1.0) / 8.0; x < fp.upper_limit; x *= 2.0) pts.push_back(x);
    pts.push_back(fp.upper_limit);
    return integrate_segments(integrand, pts, opts);
  }
  return integrate_half_line(integrand, std::min(eps, 1.0) / 8.0, 64.0, opts);
}

QuadResult finite_part_integral(const AnalyticFn& f, const FinitePartSpec& fp, double eps, const QuadOptions& opts) {
  check_spec(fp, eps);
  if (fp.interior_poles.empty()) return finite_part_integral(ComplexFn([&](double s) { return f(s); }), fp, eps, opts);

  std::vector<double> poles = fp.interior_poles;
  std::sort(poles.begin(), poles.end());
  const double rho = fp.pole_radius;
  if (!(rho > 0.0)) throw PreconditionError("interior poles need a positive indentation radius");
  if (!std::isfinite(fp.upper_limit)) throw PreconditionError("interior poles need a finite upper limit");
  for (std::size_t k = 0; k < poles.size(); ++k) {
    if (poles[k] - rho <= std::max(fp.switch_radius, 0.0) || poles[k] + rho >= fp.upper_limit ||
        (k > 0 && poles[k - 1] + rho >= poles[k] - rho))
      throw PreconditionError("indentation discs overlap each other or the interval ends");
    if (rho >= std::hypot(poles[k], eps)) throw PreconditionError("indentation disc reaches a kernel pole");
  }

  auto residual = [&](double s) -> std::complex<double> {
    if (fp.regular_near_zero && s < fp.switch_radius) return fp.regular_near_zero(s);
    return f(s) - fp.principal_at(s);
  };
  check_integrable_at_zero(residual);
  auto on_axis = [&](double s) {
    const std::complex<double> k = kernel(eps, s) * residual(s);
    return fp.weight ? fp.weight(s) * k : k;
  };

  // Real segments between the indentations.
  std::vector<double> pts{0.0};
  for (double x = std::min(eps, 1.0) / 8.0; x < poles.front() - rho; x *= 2.0) pts.push_back(x);
  QuadResult total;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    pts.push_back(poles[k] - rho);
    total += integrate_segments(on_axis, pts, opts);
    pts = {poles[k] + rho};
  }
  pts.push_back(fp.upper_limit);
  total += integrate_segments(on_axis, pts, opts);

  // Mean of the paths above (theta: pi -> 0) and below (theta: pi -> 2 pi).
  for (double c : poles) {
    auto arc = [&, c](double theta) {
      const std::complex<double> e = std::polar(1.0, theta);
      const std::complex<double> s = c + rho * e;
      std::complex<double> p = 0.0;
      for (const auto& [k, a] : fp.principal) p += a * std::pow(s, k);
      const std::complex<double> w = fp.weight ? fp.weight(s) : std::complex<double>(1.0);
      return kernel(eps, s) * w * (f(s) - p) * std::complex<double>(0.0, rho) * e;
    };
    QuadResult upper = integrate_interval(arc, 0.0, kPi, opts);
    QuadResult lower = integrate_interval(arc, kPi, 2.0 * kPi, opts);
    QuadResult mean;
    mean.value = 0.5 * (lower.value - upper.value);
    mean.abs_error = 0.5 * (upper.abs_error + lower.abs_error);
    mean.l1_norm = 0.5 * (upper.l1_norm + lower.l1_norm);
    mean.evals = upper.evals + lower.evals;
    mean.converged = upper.converged && lower.converged;
    total += mean;
  }
  return total;
}

std::vector<double> epsilon_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 8; ++i) g.push_back(0.2 * std::ldexp(1.0, -i));
  return g;
}

// ---------------------------------------------------------------------------

namespace {

double correction_value(Correction c, double e) {
  const double l = std::log(e);
  switch (c) {
    case Correction::Eps: return e;
    case Correction::EpsLog: return e * l;
    case Correction::Eps2: return e * e;
    case Correction::Eps2Log: return e * e * l;
    case Correction::Eps3: return e * e * e;
    case Correction::Eps3Log: return e * e * e * l;
    case Correction::Eps4: return std::pow(e, 4);
    case Correction::Eps5: return std::pow(e, 5);
    case Correction::Eps6: return std::pow(e, 6);
  }
  return 0.0;
}

struct Fit {
  std::complex<double> limit;
  std::vector<std::complex<double>> tower;
  double stderr_limit = 0.0;
  double condition = 0.0;
};

Fit weighted_fit(const std::vector<Sample>& samples, const std::vector<double>& w, const RichardsonOptions& opts,
                 int ncorr) {
  const int n = static_cast<int>(samples.size());
  const int T = static_cast<int>(opts.tower.size());
  const int m = 1 + T + ncorr;
  Eigen::MatrixXd A(n, m);
  Eigen::MatrixXd rhs(n, 2);
  for (int i = 0; i < n; ++i) {
    const double e = samples[static_cast<std::size_t>(i)].eps;
    A(i, 0) = 1.0;
    for (int t = 0; t < T; ++t) A(i, 1 + t) = std::pow(e, opts.tower[static_cast<std::size_t>(t)]);
    for (int c = 0; c < ncorr; ++c) A(i, 1 + T + c) = correction_value(opts.corrections[static_cast<std::size_t>(c)], e);
    A.row(i) *= w[static_cast<std::size_t>(i)];
    rhs(i, 0) = w[static_cast<std::size_t>(i)] * samples[static_cast<std::size_t>(i)].value.real();
    rhs(i, 1) = w[static_cast<std::size_t>(i)] * samples[static_cast<std::size_t>(i)].value.imag();
  }
  // Column scaling keeps the tower and the small corrections comparable.
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (int c = 0; c < m; ++c)
    if (scale(c) > 0.0) A.col(c) /= scale(c);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Fit fit;
  fit.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  const Eigen::MatrixXd x = svd.solve(rhs);
  fit.limit = {x(0, 0) / scale(0), x(0, 1) / scale(0)};
  for (int t = 0; t < T; ++t) fit.tower.emplace_back(x(1 + t, 0) / scale(1 + t), x(1 + t, 1) / scale(1 + t));

  const int dof = n - m;
  if (dof > 0) {
    const Eigen::MatrixXd r = A * x - rhs;
    const double s2 = r.squaredNorm() / dof;
    // Var(x_0) = s2 * sum_k (V_{0k} / sv_k)^2
    double v00 = 0.0;
    for (int k = 0; k < sv.size(); ++k) v00 += std::pow(svd.matrixV()(0, k) / sv(k), 2);
    fit.stderr_limit = std::sqrt(s2 * v00) / scale(0);
  }
  return fit;
}

}  // namespace

RichardsonResult richardson_limit(const std::vector<Sample>& samples, const RichardsonOptions& opts) {
  const int n = static_cast<int>(samples.size());
  if (n < 4) throw ConvergenceError("Richardson extrapolation needs at least 4 samples");
  for (int p : opts.tower)
    if (p >= 0) throw PreconditionError("tower powers must be negative");
  for (const auto& s : samples)
    if (!(s.eps > 0.0)) throw PreconditionError("sample epsilon must be positive");

  double max_err = 0.0, max_val = 0.0;
  for (const auto& s : samples) {
    max_err = std::max(max_err, s.error);
    max_val = std::max(max_val, std::abs(s.value));
  }
  if (max_val == 0.0 && max_err == 0.0) {
    RichardsonResult zero;
    zero.tower_coefficients.assign(opts.tower.size(), 0.0);
    return zero;
  }
  // Relative weights: the fit is invariant under a common rescaling of the errors.
  const double floor = std::max({1e-3 * max_err, 1e-16 * max_val});
  std::vector<double> w;
  for (const auto& s : samples) w.push_back(floor / std::max(s.error, floor));

  const int T = static_cast<int>(opts.tower.size());
  int kmax = std::min({opts.max_corrections, static_cast<int>(opts.corrections.size()), n - 2 - T});
  if (kmax < 0) throw ConvergenceError("too few samples for the declared divergent tower");

  Fit best = weighted_fit(samples, w, opts, kmax);
  while (best.condition > opts.max_condition && kmax > 0) best = weighted_fit(samples, w, opts, --kmax);
  if (best.condition > opts.max_condition) throw ConvergenceError("Richardson fit is ill-conditioned");

  RichardsonResult out;
  out.limit = best.limit;
  out.tower_coefficients = best.tower;
  out.corrections_used = kmax;
  out.condition = best.condition;
  out.error = best.stderr_limit;
  if (kmax > 0) out.error += std::abs(best.limit - weighted_fit(samples, w, opts, kmax - 1).limit);
  return out;
}

std::vector<Sample> evaluate_grid(const std::function<Sample(double)>& fn, const std::vector<double>& grid,
                                  int threads) {
  std::vector<Sample> out(grid.size());
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = fn(grid[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < grid.size(); i = next++) out[i] = fn(grid[i]);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace gvflat
