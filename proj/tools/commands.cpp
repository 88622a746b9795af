#include <algorithm>
#include <set>
#include <tuple>

#include "cli.hpp"
#include "gvflat/flatsec.hpp"

namespace gvflat::cli {

namespace {

std::string pass_text(bool ok) { return ok ? "PASS" : "FAIL"; }

// Genera with an entry in some degree dividing d.
std::set<int> genera_at(const GvTable& gv, int d) {
  std::set<int> out;
  for (const auto& [key, n] : gv.entries())
    if (n != 0 && d % key.second == 0) out.insert(key.first);
  return out;
}

std::vector<std::tuple<int, int, Rational>> by_degree(const std::map<PairsKey, Rational>& m) {
  std::vector<std::tuple<int, int, Rational>> rows;
  for (const auto& [k, c] : m)
    if (c != 0) rows.emplace_back(k.second, k.first, c);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  return rows;
}

Table pairs_table(const std::string& name, const std::string& column, const std::map<PairsKey, Rational>& m) {
  Table t{name, {"n", "d", column}, {}};
  for (const auto& [d, n, c] : by_degree(m)) t.rows.push_back({long{n}, long{d}, c.get_str()});
  return t;
}

BernoulliProvider mutated(const BernoulliMutation& mu) {
  return [mu](int n) {
    Rational b = bernoulli(n);
    if (n == mu.index) b += mu.delta;
    return b;
  };
}

}  // namespace

CommandResult cmd_bps(const RunConfig& cfg) {
  const PairsTable pt = pairs_from_gv(cfg.gv_table(), cfg.max_degree, cfg.q_lo, cfg.q_hi);
  CommandResult res;
  res.tables.push_back(pairs_table("pairs_connected", "P_prime", pt.connected));
  res.tables.push_back(pairs_table("pairs_disconnected", "P", pt.disconnected));
  return res;
}

CommandResult cmd_theorem1(const RunConfig& cfg) {
  const long n0 = cfg.theorem1_n0.value_or(cfg.gv_table().get(0, cfg.degree));
  BernoulliProvider pot = bernoulli_default(), gvb = bernoulli_default();
  if (cfg.mutation) (cfg.mutation->on_potential_side ? pot : gvb) = mutated(*cfg.mutation);
  const Theorem1Report rep = theorem1_check(n0, cfg.g_max, cfg.n_q, cfg.theorem1_variable, pot, gvb);

  Table t{"theorem1", {"g", "m", "potential_side", "gv_side", "status"}, {}};
  for (const auto& e : rep.entries)
    t.rows.push_back({long{e.g}, long{e.m}, e.potential_side.str(), e.gv_side.str(), pass_text(e.equal)});
  return {{t}, rep.all_equal};
}

CommandResult cmd_asymptotics(const RunConfig& cfg) {
  const GvTable gv = cfg.gv_table();
  const Complex v = cfg.v();
  const auto grid = cfg.eps_grid();
  const int d = cfg.degree;

  Table lim{"asymptotics",
            {"g", "d", "j", "convention", "limit_re", "limit_im", "expected_re", "expected_im", "error", "abs_diff",
             "status"},
            {}};
  Table samp{"asymptotics_samples", {"g", "d", "j", "eps", "value_re", "value_im", "error"}, {}};
  bool pass = true;
  auto add_samples = [&](int g, int j, const std::vector<Sample>& s) {
    for (const auto& x : s)
      samp.rows.push_back({long{g}, long{d}, long{j}, x.eps, x.value.real(), x.value.imag(), x.error});
  };

  const auto genera = genera_at(gv, d);
  if (genera.count(1)) {
    const Genus1Result r = genus1_extract(d, gv, v, grid, cfg.threads);
    const double diff = std::abs(r.limit - r.expected);
    const bool ok = diff <= cfg.check_tol * std::max(1.0, std::abs(r.expected));
    pass = pass && ok;
    lim.rows.push_back({1L, long{d}, 0L, std::string("genus1"), r.limit.real(), r.limit.imag(), r.expected.real(),
                        r.expected.imag(), r.error, diff, pass_text(ok)});
    add_samples(1, 0, r.samples);
  }
  const std::string conv = cfg.convention == Theorem2Convention::Derived ? "derived" : "printed";
  for (int g : genera) {
    if (g < 2) continue;
    for (int j = 1; j <= cfg.j_max; ++j) {
      const Theorem2Report r = theorem2_check(g, d, gv, v, j, grid, cfg.convention, cfg.check_tol, cfg.threads);
      pass = pass && r.pass;
      lim.rows.push_back({long{g}, long{d}, long{j}, conv, r.limit.real(), r.limit.imag(), r.expected.real(),
                          r.expected.imag(), r.error, std::abs(r.limit - r.expected), pass_text(r.pass)});
      add_samples(g, j, r.samples);
    }
  }
  return {{lim, samp}, pass};
}

CommandResult cmd_reconstruct(const RunConfig& cfg) {
  const GvTable gv = cfg.gv_table();
  const Complex v = cfg.v();
  const int d = cfg.degree;
  Table t{"reconstruct",
          {"g", "d", "j", "recovered_re", "recovered_im", "error_bar", "truth_re", "truth_im", "rel_error", "status"},
          {}};
  bool pass = true;
  for (int g : genera_at(gv, d)) {
    if (g < 2) continue;
    const ReconstructionResult rec = reconstruct_taylor(g, d, gv, v, cfg.j_max, cfg.eps_grid(), cfg.threads);
    const GvDerivativeTable truth = gv_derivatives(gv, d, v, g, cfg.j_max);
    for (int j = 0; j <= cfg.j_max; ++j) {
      const Complex want = truth.at(j);
      if (j >= static_cast<int>(rec.values.size())) {
        pass = false;
        t.rows.push_back({long{g}, long{d}, long{j}, 0.0, 0.0, 0.0, want.real(), want.imag(), 0.0,
                          std::string("MISSING")});
        continue;
      }
      const Complex got = rec.values[static_cast<std::size_t>(j)];
      const double rel = std::abs(got - want) / std::max(1.0, std::abs(want));
      const bool ok = rel <= cfg.reconstruct_tol;
      pass = pass && ok;
      t.rows.push_back({long{g}, long{d}, long{j}, got.real(), got.imag(), rec.errors[static_cast<std::size_t>(j)],
                        want.real(), want.imag(), rel, pass_text(ok)});
    }
  }
  return {{t}, pass};
}

CommandResult cmd_vanishing(const RunConfig& cfg) {
  const VanishingResult r =
      vanishing_experiment(cfg.vanishing_m, cfg.vanishing_ranks, cfg.G, cfg.lambdas(), cfg.v(), cfg.vanishing_t,
                           cfg.quad());
  Table scan{"vanishing", {"lambda", "magnitude"}, {}};
  for (std::size_t i = 0; i < r.lambdas.size(); ++i) scan.rows.push_back({r.lambdas[i], r.magnitudes[i]});

  std::string ranks;
  for (int k : cfg.vanishing_ranks) ranks += (ranks.empty() ? "" : " ") + std::to_string(k);
  const double bound = -0.5 * cfg.vanishing_m + 0.1;
  const bool ok = r.slope <= bound;
  Table fit{"vanishing_fit", {"m", "ranks", "slope", "bound", "status"}, {}};
  fit.rows.push_back({long{cfg.vanishing_m}, ranks, r.slope, bound, pass_text(ok)});
  return {{scan, fit}, ok};
}

CommandResult cmd_genus0(const RunConfig& cfg) {
  const GvTable gv = cfg.gv_table();
  const Complex v = cfg.v();
  const long n0 = gv.get(0, cfg.degree);
  const FormalBiSeries series = potential_series(n0, cfg.g_max, cfg.n_q);

  Table num{"genus0",
            {"t", "numeric_re", "numeric_im", "tail_bound", "series_re", "series_im", "abs_diff", "status"},
            {}};
  bool pass = true;
  for (double t : cfg.genus0_t) {
    const Genus0Numeric r = genus0_potential_numeric(t, v, n0, cfg.genus0_K, cfg.genus0_N);
    const Complex s = series.evaluate(t, v);
    const double diff = std::abs(r.value - s);
    const bool ok = diff <= r.tail_bound + cfg.check_tol * std::max(1.0, std::abs(s));
    pass = pass && ok;
    num.rows.push_back({t, r.value.real(), r.value.imag(), r.tail_bound, s.real(), s.imag(), diff, pass_text(ok)});
  }

  Table reg{"genus0_regularized", {"d", "eps", "value_re", "value_im", "error"}, {}};
  for (double e : cfg.eps_grid()) {
    const QuadResult q = genus0_regularized(cfg.degree, gv, v, e, cfg.quad());
    reg.rows.push_back({long{cfg.degree}, e, q.value.real(), q.value.imag(), q.abs_error});
  }
  return {{num, reg}, pass};
}

}  // namespace gvflat::cli
