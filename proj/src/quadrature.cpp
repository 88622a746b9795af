#include "gvflat/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>

#include "gvflat/error.hpp"

namespace gvflat {

QuadResult& QuadResult::operator+=(const QuadResult& o) {
  value += o.value;
  abs_error += o.abs_error;
  l1_norm += o.l1_norm;
  evals += o.evals;
  converged = converged && o.converged;
  return *this;
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Piece {
  double a, b;
  std::complex<double> value;
  double error, l1;
  bool operator<(const Piece& o) const { return error < o.error; }
};

// One GK31 application. With max_depth 0 Boost reports the error and L1 of
// the rule on [-1, 1]; both are rescaled to [a, b] here.
Piece rule(const ComplexFn& f, double a, double b, long& evals) {
  double err = 0.0, l1 = 0.0;
  auto g = [&](double x) {
    ++evals;
    return f(x);
  };
  const std::complex<double> v = GK::integrate(g, a, b, 0, 0.0, &err, &l1);
  return {a, b, v, err * 0.5 * (b - a), l1};
}

}  // namespace

QuadResult integrate_segments(const ComplexFn& f, const std::vector<double>& points, const QuadOptions& opts) {
  if (points.size() < 2) throw PreconditionError("need at least two integration points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i] < points[i + 1])) throw PreconditionError("integration points must increase");
  for (std::size_t i = 0; i + 2 < points.size(); ++i)
    if (!std::isfinite(points[i + 1])) throw PreconditionError("only the last point may be infinite");

  // An infinite last segment [a, inf) becomes [0, 1) via s = a + u/(1-u).
  const double a_inf = points.back() == std::numeric_limits<double>::infinity() ? points[points.size() - 2] : NAN;
  auto tail = [&](double u) {
    const double w = 1.0 - u;
    const double s = a_inf + u / w;
    if (!(w > 0.0) || !std::isfinite(s)) return std::complex<double>(0.0);
    return f(s) / (w * w);
  };
  const ComplexFn tail_fn = tail;

  QuadResult out;
  std::priority_queue<Piece> finite, mapped;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (std::isfinite(points[i + 1]))
      finite.push(rule(f, points[i], points[i + 1], out.evals));
    else
      mapped.push(rule(tail_fn, 0.0, 1.0, out.evals));
  }

  auto totals = [&](std::complex<double>& v, double& e, double& l1) {
    v = 0.0;
    e = l1 = 0.0;
    for (auto* q : {&finite, &mapped}) {
      auto copy = *q;
      while (!copy.empty()) {
        v += copy.top().value;
        e += copy.top().error;
        l1 += copy.top().l1;
        copy.pop();
      }
    }
  };

  std::complex<double> v;
  double e, l1;
  totals(v, e, l1);
  const double floor_eps = 50.0 * std::numeric_limits<double>::epsilon();
  while (true) {
    const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(v), floor_eps * l1});
    if (e <= target || !std::isfinite(e)) break;
    if (static_cast<int>(finite.size() + mapped.size()) >= opts.max_intervals) break;
    const bool from_mapped = !mapped.empty() && (finite.empty() || mapped.top().error > finite.top().error);
    auto& q = from_mapped ? mapped : finite;
    const ComplexFn& g = from_mapped ? tail_fn : f;
    const Piece p = q.top();
    const double mid = 0.5 * (p.a + p.b);
    if (!(p.a < mid && mid < p.b)) break;  // no room left to bisect
    q.pop();
    const Piece left = rule(g, p.a, mid, out.evals), right = rule(g, mid, p.b, out.evals);
    q.push(left);
    q.push(right);
    v += left.value + right.value - p.value;
    e += left.error + right.error - p.error;
    l1 += left.l1 + right.l1 - p.l1;
    if ((finite.size() + mapped.size()) % 256 == 0) totals(v, e, l1);  // limit drift of the running sums
  }
  totals(v, e, l1);
  out.value = v;
  out.abs_error = e;
  out.l1_norm = l1;
  const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(v), floor_eps * l1});
  out.converged = std::isfinite(v.real()) && std::isfinite(v.imag()) && e <= 10.0 * target;
  return out;
}

QuadResult integrate_interval(const ComplexFn& f, double a, double b, const QuadOptions& opts) {
  if (!(a < b)) throw PreconditionError("integration interval must have a < b");
  return integrate_segments(f, {a, b}, opts);
}

QuadResult integrate_half_line(const ComplexFn& f, double small, double large, const QuadOptions& opts) {
  if (!(small > 0.0) || !(large >= small)) throw PreconditionError("half-line scales must satisfy 0 < small <= large");
  std::vector<double> pts{0.0};
  for (double x = small; x < large; x *= 2.0) pts.push_back(x);
  if (pts.back() < large) pts.push_back(large);
  pts.push_back(std::numeric_limits<double>::infinity());
  return integrate_segments(f, pts, opts);
}

}  // namespace gvflat
