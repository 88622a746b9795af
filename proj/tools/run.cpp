#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "gvflat/error.hpp"

namespace gvflat::cli {

namespace {

using Command = CommandResult (*)(const RunConfig&);

const std::map<std::string, std::pair<Command, const char*>>& commands() {
  static const std::map<std::string, std::pair<Command, const char*>> table{
      {"bps", {cmd_bps, "Connected and disconnected pairs invariants from GV input"}},
      {"theorem1", {cmd_theorem1, "Exact genus-0 coefficient comparison"}},
      {"asymptotics", {cmd_asymptotics, "Extrapolated eps -> 0 limits of L^j p_g, with grid samples"}},
      {"reconstruct", {cmd_reconstruct, "Recover D_{g,j} from the eps asymptotics"}},
      {"vanishing", {cmd_vanishing, "Large-volume decay of graph contributions"}},
      {"genus0", {cmd_genus0, "Numeric genus-0 potential against its lambda series"}},
  };
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(p.string() + ": cannot write output");
  out << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gopakumar-Vafa asymptotics and flat-section experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  double tol = 0.0;
  int threads = 0;
  app.add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)");
  app.add_option("--out", out_dir, "Output directory (overrides the config's output field)");
  app.add_option("--tol", tol, "Check tolerance (overrides tolerances.check)")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  for (const auto& [name, entry] : commands()) app.add_subcommand(name, entry.second);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = parse_config(read_file(config_path));
    if (!cfg.experiment.empty() && cfg.experiment != name)
      throw ConfigError("experiment: config is for '" + cfg.experiment + "' but the subcommand is '" + name + "'");
    if (tol > 0.0) cfg.check_tol = tol;
    if (threads > 0) cfg.threads = threads;
    if (!out_dir.empty()) cfg.output = out_dir;
  } catch (const ConfigError& e) {
    err << "config error: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << "\n";
    return kConfigError;
  }

  CommandResult res;
  try {
    res = commands().at(name).first(cfg);
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const WindowError& e) {
    err << "config error: q_window: " << e.what() << "\n";
    return kConfigError;
  } catch (const ConvergenceError& e) {
    err << "check failure: " << e.what() << "\n";
    return kCheckFailure;
  }

  try {
    const std::filesystem::path dir(cfg.output);
    std::filesystem::create_directories(dir);
    for (const auto& t : res.tables) {
      write_file(dir / (t.name + ".csv"), to_csv(t));
      write_file(dir / (t.name + ".json"), to_json(t));
      out << t.name << ": " << t.rows.size() << " rows -> " << (dir / (t.name + ".csv")).string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "config error: output: " << e.what() << "\n";
    return kConfigError;
  }
  out << name << ": " << (res.pass ? "PASS" : "FAIL") << "\n";
  return res.pass ? kSuccess : kCheckFailure;
}

}  // namespace gvflat::cli
