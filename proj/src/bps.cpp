#include "gvflat/bps.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace gvflat {

void GvTable::set(int g, int d, long n) {
  if (g < 0) throw PreconditionError("GV genus must be >= 0");
  if (d < 1) throw PreconditionError("GV degree must be >= 1");
  if (n == 0)
    entries_.erase({g, d});
  else
    entries_[{g, d}] = n;
}

long GvTable::get(int g, int d) const {
  auto it = entries_.find({g, d});
  return it == entries_.end() ? 0 : it->second;
}

int GvTable::g_max() const {
  int out = -1;
  for (const auto& [key, n] : entries_) out = std::max(out, key.first);
  return out;
}

int GvTable::g_max(int d) const {
  int out = -1;
  for (const auto& [key, n] : entries_)
    if (key.second == d) out = std::max(out, key.first);
  return out;
}

int GvTable::d_max() const {
  int out = 0;
  for (const auto& [key, n] : entries_) out = std::max(out, key.second);
  return out;
}

std::map<int, long> GvTable::genus_row(int g) const {
  std::map<int, long> row;
  for (const auto& [key, n] : entries_)
    if (key.first == g) row[key.second] = n;
  return row;
}

GvTable GvTable::restricted_to_genus(int g) const {
  GvTable out;
  for (const auto& [key, n] : entries_)
    if (key.first == g) out.set(key.first, key.second, n);
  return out;
}

// ---------------------------------------------------------------------------

LaurentPoly bps_kernel(int g, int r, int lo, int hi) {
  if (g < 0) throw PreconditionError("genus must be >= 0");
  if (r < 1) throw PreconditionError("multiple cover index r must be >= 1");
  if (lo > hi) throw PreconditionError("empty window");
  const Rational prefactor = Rational((g % 2 == 1) ? 1 : -1) / r;  // (-1)^{g-1}/r

  if (g == 0) {
    const int wlo = std::min(lo, -r);
    const int whi = std::max(hi, r);
    LaurentPoly base = LaurentPoly::neg_q_power(r, wlo, whi) + LaurentPoly::neg_q_power(-r, wlo, whi) +
                       LaurentPoly::monomial(-2, 0, wlo, whi);
    LaurentPoly inv = laurent_pow(base, -1) * prefactor;
    LaurentPoly out = inv.rewindow(lo, hi);
    out.mark_truncated();
    return out;
  }

  const int reach = r * (g - 1);
  if (-reach < lo || reach > hi)
    throw WindowError("window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] cannot hold q^{+-" +
                      std::to_string(reach) + "}");
  LaurentPoly base = LaurentPoly::neg_q_power(r, lo, hi) + LaurentPoly::neg_q_power(-r, lo, hi) +
                     LaurentPoly::monomial(-2, 0, lo, hi);
  return laurent_pow(base, g - 1) * prefactor;
}

LaurentPoly connected_series(const GvTable& gv, int d, int lo, int hi) {
  if (d < 1) throw PreconditionError("degree must be >= 1");
  LaurentPoly out(lo, hi);
  for (const auto& [key, n] : gv.entries()) {
    const auto [g, dd] = key;
    if (d % dd != 0) continue;
    const int r = d / dd;
    const int reach = g >= 1 ? r * (g - 1) : r;
    const LaurentPoly k = bps_kernel(g, r, std::min(lo, -reach), std::max(hi, reach));
    LaurentPoly cut = k.rewindow(lo, hi);
    if (k.truncated()) cut.mark_truncated();
    out += cut * Rational(n);
  }
  return out;
}

// ---------------------------------------------------------------------------

int minimal_slope(const std::map<PairsKey, Rational>& terms) {
  int s = 0;
  for (const auto& [key, c] : terms) {
    const auto [n, d] = key;
    if (sgn(c) == 0 || d < 1 || n >= 0) continue;
    s = std::max(s, (-n + d - 1) / d);
  }
  return s;
}

namespace {

TwistedSeries to_twisted(const std::map<PairsKey, Rational>& terms, int D, int lo, int hi, int slope) {
  TwistedSeries out(D, lo, hi, slope);
  for (const auto& [key, c] : terms) out.add(key.second, key.first, c);
  return out;
}

std::map<PairsKey, Rational> from_twisted(const TwistedSeries& s) {
  std::map<PairsKey, Rational> out;
  for (const auto& [key, c] : s.terms())
    if (key.first >= 1) out[{key.second, key.first}] = c;
  return out;
}

void reject_degree_zero(const std::map<PairsKey, Rational>& terms) {
  for (const auto& [key, c] : terms)
    if (key.second < 1 && sgn(c) != 0) throw PreconditionError("pairs invariants need degree >= 1");
}

}  // namespace

std::map<PairsKey, Rational> disconnected_from_connected(const std::map<PairsKey, Rational>& connected, int D, int lo,
                                                         int hi) {
  reject_degree_zero(connected);
  const int slope = minimal_slope(connected);
  return from_twisted(twisted_exp(to_twisted(connected, D, lo, hi, slope)));
}

std::map<PairsKey, Rational> connected_from_disconnected(const std::map<PairsKey, Rational>& disconnected, int D,
                                                         int lo, int hi) {
  std::map<PairsKey, Rational> rest;
  for (const auto& [key, c] : disconnected) {
    if (key.second == 0) {
      if (key.first != 0 || c != 1) throw PreconditionError("disconnected series must have constant term 1");
      continue;
    }
    rest[key] = c;
  }
  reject_degree_zero(rest);
  const int slope = minimal_slope(rest);
  TwistedSeries g = to_twisted(rest, D, lo, hi, slope);
  g.add(0, 0, 1);
  return from_twisted(twisted_log(g));
}

PairsTable pairs_from_gv(const GvTable& gv, int D, int lo, int hi) {
  if (D < 1) throw PreconditionError("degree cutoff must be >= 1");
  const int slope = std::max(0, gv.g_max() - 1);
  TwistedSeries f(D, lo, hi, slope);
  for (int d = 1; d <= D; ++d) {
    const LaurentPoly F = connected_series(gv, d, std::min(lo, -slope * d), f.cap(d));
    for (const auto& [n, c] : F.terms()) f.add(d, n, c);
  }
  const TwistedSeries P = twisted_exp(f);

  PairsTable out;
  out.max_degree = D;
  out.lo = lo;
  out.hi = hi;
  for (const auto& [key, c] : f.window_terms()) out.connected[{key.second, key.first}] = c;
  for (const auto& [key, c] : P.window_terms())
    if (key.first >= 1) out.disconnected[{key.second, key.first}] = c;
  return out;
}

Rational dt_torsion(long n, int d, const std::map<int, long>& n0) {
  if (d < 1) throw PreconditionError("degree must be >= 1");
  Rational total = 0;
  const long an = std::labs(n);
  for (int k = 1; k <= d; ++k) {
    if (d % k != 0 || (an != 0 && an % k != 0)) continue;
    auto it = n0.find(d / k);
    if (it == n0.end()) continue;
    total += Rational(it->second) / (static_cast<long>(k) * k);
  }
  return total;
}

Rational dt_is_pairs(int n, int d, const GvTable& gv) {
  const PairsTable t = pairs_from_gv(gv, d, n, n);
  auto it = t.disconnected.find({n, d});
  return it == t.disconnected.end() ? Rational(0) : it->second;
}

}  // namespace gvflat
