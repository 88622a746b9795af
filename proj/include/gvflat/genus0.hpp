#ifndef GVFLAT_GENUS0_HPP
#define GVFLAT_GENUS0_HPP

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gvflat/series.hpp"
#include "gvflat/specialfn.hpp"

namespace gvflat {

/// Exact element of Q[pi, i]: sum of c * pi^a * i^b with b in {0, 1}.
class SymValue {
 public:
  SymValue() = default;
  static SymValue term(const Rational& c, int pi_power, int i_power = 0);

  SymValue& operator+=(const SymValue& o);
  SymValue& operator*=(const Rational& c);
  /// Multiply by pi^a i^b.
  SymValue times(int pi_power, int i_power) const;
  friend SymValue operator+(SymValue a, const SymValue& b) { return a += b; }
  friend SymValue operator-(SymValue a, const SymValue& b) { return a += b.times(0, 2); }
  bool operator==(const SymValue& o) const { return terms_ == o.terms_; }
  bool is_zero() const { return terms_.empty(); }

  const std::map<std::pair<int, int>, Rational>& terms() const { return terms_; }
  std::complex<double> evaluate() const;
  std::string str() const;

 private:
  std::map<std::pair<int, int>, Rational> terms_;  // (pi power, i power) -> coefficient
};

/// Formal series sum c_{a,m} lambda^a Q^m with lambda = 2 pi t and Q = e^{2 pi i v}.
class FormalBiSeries {
 public:
  using Key = std::pair<int, int>;  // (lambda power, Q power)

  FormalBiSeries(int g_max, int n_q) : g_max_(g_max), n_q_(n_q) {}

  void add(int lambda_power, int q_power, const SymValue& c);
  SymValue coeff(int lambda_power, int q_power) const;
  const std::map<Key, SymValue>& terms() const { return terms_; }
  int g_max() const { return g_max_; }
  int n_q() const { return n_q_; }

  /// d/dt with lambda = 2 pi t.
  FormalBiSeries d_t() const;
  /// d/dv with Q = e^{2 pi i v}: Q^m -> 2 pi i m Q^m.
  FormalBiSeries d_v() const;
  /// Multiply by pi^a i^b * c.
  FormalBiSeries scaled(const Rational& c, int pi_power, int i_power) const;

  std::complex<double> evaluate(double t, std::complex<double> v) const;

 private:
  int g_max_;
  int n_q_;
  std::map<Key, SymValue> terms_;
};

using BernoulliProvider = std::function<Rational(int)>;
inline BernoulliProvider bernoulli_default() { return [](int n) { return bernoulli(n); }; }

/// Truncated double sum n0 sum_{k<=K} 1/(pi k) sum_{n<=N} (lambda/k)/(1 + (n lambda/k)^2) Q^n.
struct Genus0Numeric {
  std::complex<double> value;
  double tail_bound;  // bound on the omitted k > K and n > N terms
};
Genus0Numeric genus0_potential_numeric(double t, std::complex<double> v, long n0, int K, int N);

/// n0 sum_{g=1}^{g_max} B_{2g}/(2g)! (2 pi)^{2g-1} Li_{2-2g}(Q) lambda^{2g-1}, Q-orders 1..n_q.
FormalBiSeries potential_series(long n0, int g_max, int n_q, const BernoulliProvider& bern = bernoulli_default());

enum class GvVariable {
  Real,       // u = 2 pi lambda
  Imaginary,  // u = 2 pi i lambda
};

/// Positive-degree part n0 sum_{g=2}^{g_max} (-1)^{g-1} B_{2g}/(2g (2g-2)!) u^{2g-2} Li_{3-2g}(Q).
FormalBiSeries gv_genus0_series(long n0, int g_max, int n_q, GvVariable var = GvVariable::Real,
                                const BernoulliProvider& bern = bernoulli_default());

struct Theorem1Entry {
  int g;
  int m;
  SymValue potential_side;
  SymValue gv_side;
  bool equal;
};

struct Theorem1Report {
  std::vector<Theorem1Entry> entries;
  bool all_equal = true;
  /// First mismatching (g, m), if any.
  std::string first_mismatch() const;
};

/// Compares -(1/(2 pi i)) d_t potential_series with d_v gv_genus0_series on
/// every lambda^{2g-2} Q^m, 2 <= g <= g_max, 1 <= m <= n_q.
Theorem1Report theorem1_check(long n0, int g_max, int n_q, GvVariable var = GvVariable::Real,
                              const BernoulliProvider& potential_bernoulli = bernoulli_default(),
                              const BernoulliProvider& gv_bernoulli = bernoulli_default());

}  // namespace gvflat

#endif
