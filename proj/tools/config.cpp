#include <cmath>
#include <set>

#include <json.hpp>

#include "cli.hpp"
#include "gvflat/error.hpp"
#include "gvflat/lattice.hpp"

namespace gvflat::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, _] : obj.items())
    if (!ok.count(k)) fail(path.empty() ? k : path + "." + k, "unknown field");
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

long get_long(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

int get_int(const json& j, const std::string& path) {
  const long x = get_long(j, path);
  if (x < -1000000000L || x > 1000000000L) fail(path, "integer out of range");
  return static_cast<int>(x);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Complex get_complex(const json& j, const std::string& path) {
  only_keys(j, path, {"re", "im"});
  double re = 0.0, im = 0.0;
  if (j.contains("re")) re = get_double(j["re"], path + ".re");
  if (j.contains("im")) im = get_double(j["im"], path + ".im");
  return {re, im};
}

std::vector<double> get_doubles(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_double(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Rational get_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  const std::string s = get_string(j, path);
  try {
    Rational q(s);
    if (q.get_den() == 0) fail(path, "zero denominator");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    fail(path, "expected an integer or a rational string such as \"1/7\"");
  }
}

// Line and column (both 1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void parse_gv(const json& j, RunConfig& c) {
  if (!j.is_array()) fail("gv", "expected an array of {g, d, n}");
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = "gv[" + std::to_string(i) + "]";
    only_keys(j[i], p, {"g", "d", "n"});
    for (const char* k : {"g", "d", "n"})
      if (!j[i].contains(k)) fail(join(p, k), "missing");
    GvEntry e{get_int(j[i]["g"], p + ".g"), get_int(j[i]["d"], p + ".d"), get_long(j[i]["n"], p + ".n")};
    if (e.g < 0) fail(p + ".g", "genus must be >= 0");
    if (e.d < 1) fail(p + ".d", "degree must be >= 1");
    if (!seen.insert({e.g, e.d}).second) fail(p, "duplicate (g, d)");
    c.gv.push_back(e);
  }
}

void parse_geometry(const json& j, RunConfig& c) {
  only_keys(j, "geometry", {"B", "omega", "G", "beta"});
  if (j.contains("B")) c.B = get_doubles(j["B"], "geometry.B");
  if (j.contains("omega")) c.omega = get_doubles(j["omega"], "geometry.omega");
  if (j.contains("G")) c.G = get_complex(j["G"], "geometry.G");
  if (j.contains("beta")) {
    if (!j["beta"].is_array()) fail("geometry.beta", "expected an array of integers");
    c.beta.clear();
    for (std::size_t i = 0; i < j["beta"].size(); ++i)
      c.beta.push_back(get_long(j["beta"][i], "geometry.beta[" + std::to_string(i) + "]"));
  }
}

void validate(RunConfig& c) {
  if (c.B.empty()) fail("geometry.B", "needs at least one entry");
  if (c.B.size() != c.omega.size()) fail("geometry.omega", "must have the same length as geometry.B");
  if (c.beta.size() != c.B.size()) fail("geometry.beta", "must have the same length as geometry.B");
  for (std::size_t i = 0; i < c.omega.size(); ++i)
    if (!(c.omega[i] > 0.0)) fail("geometry.omega[" + std::to_string(i) + "]", "must be > 0");
  if (!(c.G.real() > 0.0)) fail("geometry.G.re", "Re G must be > 0");
  if (!(c.v().imag() > 0.0)) fail(c.v_override ? "v.im" : "geometry", "Im v_beta must be > 0");
  if (c.degree < 1) fail("degree", "must be >= 1");

  if (!(c.quad_rel > 0.0)) fail("tolerances.quad_rel", "must be > 0");
  if (!(c.quad_abs > 0.0)) fail("tolerances.quad_abs", "must be > 0");
  if (!(c.check_tol > 0.0)) fail("tolerances.check", "must be > 0");
  if (!(c.reconstruct_tol > 0.0)) fail("tolerances.reconstruct", "must be > 0");

  if (!(c.eps_start > 0.0)) fail("eps_grid.start", "must be > 0");
  if (!(c.eps_ratio > 0.0 && c.eps_ratio < 1.0)) fail("eps_grid.ratio", "must lie in (0, 1)");
  if (c.eps_count < 3) fail("eps_grid.count", "must be >= 3");

  if (c.q_lo > c.q_hi) fail("q_window", "lo must not exceed hi");

  if (c.max_degree < 1) fail("orders.max_degree", "must be >= 1");
  if (c.g_max < 2) fail("orders.g_max", "must be >= 2");
  if (c.n_q < 1) fail("orders.n_q", "must be >= 1");
  if (c.j_max < 0) fail("orders.j_max", "must be >= 0");

  if (c.mutation) {
    const int k = c.mutation->index;
    if (k < 2 || k > 2 * c.g_max || k % 2 != 0) fail("theorem1.mutation.index", "must be an even index in [2, 2 g_max]");
  }

  if (c.vanishing_m != 1 && c.vanishing_m != 2) fail("vanishing.m", "must be 1 or 2");
  if (static_cast<int>(c.vanishing_ranks.size()) != c.vanishing_m)
    fail("vanishing.ranks", "needs one rank per vertex");
  for (std::size_t i = 0; i < c.vanishing_ranks.size(); ++i)
    if (c.vanishing_ranks[i] < 1) fail("vanishing.ranks[" + std::to_string(i) + "]", "must be >= 1");
  if (!(c.lambda_start > 0.0)) fail("vanishing.lambda.start", "must be > 0");
  if (!(c.lambda_stop > c.lambda_start)) fail("vanishing.lambda.stop", "must exceed start");
  if (c.lambda_count < 2) fail("vanishing.lambda.count", "must be >= 2");

  if (c.genus0_K < 1) fail("genus0.K", "must be >= 1");
  if (c.genus0_N < 1) fail("genus0.N", "must be >= 1");

  if (c.threads < 1) fail("threads", "must be >= 1");

  for (std::size_t i = 0; i < c.gv.size(); ++i)
    if (c.gv[i].d > c.max_degree)
      fail("gv[" + std::to_string(i) + "].d", "exceeds orders.max_degree");
}

}  // namespace

GvTable RunConfig::gv_table() const {
  GvTable t;
  for (const auto& e : gv) t.set(e.g, e.d, e.n);
  return t;
}

Complex RunConfig::v() const {
  if (v_override) return *v_override;
  Complex acc = 0.0;
  for (std::size_t i = 0; i < B.size() && i < beta.size(); ++i)
    acc += Complex(B[i], omega[i]) * static_cast<double>(beta[i]);
  return acc;
}

std::vector<double> RunConfig::eps_grid() const {
  std::vector<double> g;
  for (int i = 0; i < eps_count; ++i) g.push_back(eps_start * std::pow(eps_ratio, i));
  return g;
}

std::vector<double> RunConfig::lambdas() const {
  std::vector<double> l;
  const double step = std::log(lambda_stop / lambda_start) / (lambda_count - 1);
  for (int i = 0; i < lambda_count; ++i) l.push_back(lambda_start * std::exp(step * i));
  l.back() = lambda_stop;
  return l;
}

QuadOptions RunConfig::quad() const {
  QuadOptions o;
  o.rel_tol = quad_rel;
  o.abs_tol = quad_abs;
  return o;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte);
    // Drop the library's own prefix and keep the description.
    std::string what = e.what();
    if (const auto at = what.find("column "); at != std::string::npos)
      if (const auto colon = what.find(": ", at); colon != std::string::npos) what = what.substr(colon + 2);
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }
  only_keys(root, "",
            {"gv", "geometry", "v", "experiment", "degree", "tolerances", "eps_grid", "q_window", "orders", "theorem1",
             "asymptotics", "vanishing", "genus0", "threads", "output"});

  RunConfig c;
  if (root.contains("gv")) parse_gv(root["gv"], c);
  if (root.contains("geometry")) parse_geometry(root["geometry"], c);
  if (root.contains("v")) c.v_override = get_complex(root["v"], "v");
  if (root.contains("experiment")) c.experiment = get_string(root["experiment"], "experiment");
  if (root.contains("degree")) c.degree = get_int(root["degree"], "degree");

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    only_keys(t, "tolerances", {"quad_rel", "quad_abs", "check", "reconstruct"});
    if (t.contains("quad_rel")) c.quad_rel = get_double(t["quad_rel"], "tolerances.quad_rel");
    if (t.contains("quad_abs")) c.quad_abs = get_double(t["quad_abs"], "tolerances.quad_abs");
    if (t.contains("check")) c.check_tol = get_double(t["check"], "tolerances.check");
    if (t.contains("reconstruct")) c.reconstruct_tol = get_double(t["reconstruct"], "tolerances.reconstruct");
  }
  if (root.contains("eps_grid")) {
    const json& e = root["eps_grid"];
    only_keys(e, "eps_grid", {"start", "ratio", "count"});
    if (e.contains("start")) c.eps_start = get_double(e["start"], "eps_grid.start");
    if (e.contains("ratio")) c.eps_ratio = get_double(e["ratio"], "eps_grid.ratio");
    if (e.contains("count")) c.eps_count = get_int(e["count"], "eps_grid.count");
  }
  if (root.contains("q_window")) {
    const json& q = root["q_window"];
    only_keys(q, "q_window", {"lo", "hi"});
    if (q.contains("lo")) c.q_lo = get_int(q["lo"], "q_window.lo");
    if (q.contains("hi")) c.q_hi = get_int(q["hi"], "q_window.hi");
  }
  if (root.contains("orders")) {
    const json& o = root["orders"];
    only_keys(o, "orders", {"max_degree", "g_max", "n_q", "j_max"});
    if (o.contains("max_degree")) c.max_degree = get_int(o["max_degree"], "orders.max_degree");
    if (o.contains("g_max")) c.g_max = get_int(o["g_max"], "orders.g_max");
    if (o.contains("n_q")) c.n_q = get_int(o["n_q"], "orders.n_q");
    if (o.contains("j_max")) c.j_max = get_int(o["j_max"], "orders.j_max");
  }
  if (root.contains("theorem1")) {
    const json& t = root["theorem1"];
    only_keys(t, "theorem1", {"n0", "variable", "mutation"});
    if (t.contains("n0")) c.theorem1_n0 = get_long(t["n0"], "theorem1.n0");
    if (t.contains("variable")) {
      const std::string v = get_string(t["variable"], "theorem1.variable");
      if (v == "real")
        c.theorem1_variable = GvVariable::Real;
      else if (v == "imaginary")
        c.theorem1_variable = GvVariable::Imaginary;
      else
        fail("theorem1.variable", "expected \"real\" or \"imaginary\"");
    }
    if (t.contains("mutation") && !t["mutation"].is_null()) {
      const json& m = t["mutation"];
      only_keys(m, "theorem1.mutation", {"index", "delta", "side"});
      BernoulliMutation mu;
      if (m.contains("index")) mu.index = get_int(m["index"], "theorem1.mutation.index");
      if (m.contains("delta")) mu.delta = get_rational(m["delta"], "theorem1.mutation.delta");
      if (m.contains("side")) {
        const std::string s = get_string(m["side"], "theorem1.mutation.side");
        if (s != "potential" && s != "gv") fail("theorem1.mutation.side", "expected \"potential\" or \"gv\"");
        mu.on_potential_side = s == "potential";
      }
      c.mutation = mu;
    }
  }
  if (root.contains("asymptotics")) {
    const json& a = root["asymptotics"];
    only_keys(a, "asymptotics", {"convention"});
    if (a.contains("convention")) {
      const std::string s = get_string(a["convention"], "asymptotics.convention");
      if (s == "derived")
        c.convention = Theorem2Convention::Derived;
      else if (s == "printed")
        c.convention = Theorem2Convention::Printed;
      else
        fail("asymptotics.convention", "expected \"derived\" or \"printed\"");
    }
  }
  if (root.contains("vanishing")) {
    const json& v = root["vanishing"];
    only_keys(v, "vanishing", {"m", "ranks", "lambda", "t"});
    if (v.contains("m")) {
      c.vanishing_m = get_int(v["m"], "vanishing.m");
      c.vanishing_ranks.assign(static_cast<std::size_t>(std::max(c.vanishing_m, 0)), 1);
    }
    if (v.contains("ranks")) {
      if (!v["ranks"].is_array()) fail("vanishing.ranks", "expected an array of integers");
      c.vanishing_ranks.clear();
      for (std::size_t i = 0; i < v["ranks"].size(); ++i)
        c.vanishing_ranks.push_back(get_int(v["ranks"][i], "vanishing.ranks[" + std::to_string(i) + "]"));
    }
    if (v.contains("lambda")) {
      const json& l = v["lambda"];
      only_keys(l, "vanishing.lambda", {"start", "stop", "count"});
      if (l.contains("start")) c.lambda_start = get_double(l["start"], "vanishing.lambda.start");
      if (l.contains("stop")) c.lambda_stop = get_double(l["stop"], "vanishing.lambda.stop");
      if (l.contains("count")) c.lambda_count = get_int(l["count"], "vanishing.lambda.count");
    }
    if (v.contains("t")) c.vanishing_t = get_complex(v["t"], "vanishing.t");
  }
  if (root.contains("genus0")) {
    const json& g = root["genus0"];
    only_keys(g, "genus0", {"t", "K", "N"});
    if (g.contains("t")) c.genus0_t = get_doubles(g["t"], "genus0.t");
    if (g.contains("K")) c.genus0_K = get_int(g["K"], "genus0.K");
    if (g.contains("N")) c.genus0_N = get_int(g["N"], "genus0.N");
  }
  if (root.contains("threads")) c.threads = get_int(root["threads"], "threads");
  if (root.contains("output")) c.output = get_string(root["output"], "output");

  validate(c);
  return c;
}

}  // namespace gvflat::cli
