// wavelab command-line driver: named experiments, strip validation and the
// experiment catalog. Outputs are written atomically; identical configs
// produce byte-identical files.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>

#include "wavelab/experiments.hpp"

namespace {

using namespace wavelab;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  int jobs = 1;
  bool quiet = false;
  bool self_test = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file (key = value lines)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--format", args.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", args.jobs, "max concurrent sweep members")->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
  cmd->add_flag("--self-test", args.self_test, "run the experiment's internal checks");
  cmd->add_option("--set", args.sets, "override a config key, e.g. --set t_end=80");
}

int run_named(const std::string& name, const CommonArgs& args) {
  Config file_cfg;
  if (!args.config_path.empty()) file_cfg = Config::parse_file(args.config_path);
  if (file_cfg.has("experiment") && file_cfg.get_string("experiment", name) != name)
    throw ConfigError("config file names experiment '" +
                      file_cfg.get_string("experiment", "") + "' but subcommand is '" + name +
                      "'");

  Config overrides;
  for (const auto& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    overrides.set(kv.substr(0, eq), kv.substr(eq + 1));
  }

  const RunResult res = run_experiment(name, file_cfg, overrides, args.jobs);

  const std::filesystem::path out(args.out_dir);
  for (const auto& table : res.tables) {
    if (args.format == "csv")
      atomic_write(out / (table.name + ".csv"), table.to_csv());
    else
      atomic_write(out / (table.name + ".json"), table.to_json().dump(2) + "\n");
  }
  atomic_write(out / (res.experiment + "_manifest.json"), res.manifest.dump(2) + "\n");

  if (!args.quiet) {
    std::cout << res.experiment << ": wrote " << res.tables.size() + 1 << " file(s) to "
              << out.string() << " (" << res.wall_seconds << "s)\n";
    for (const auto& c : res.checks)
      std::cout << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << " (" << c.detail
                << ")\n";
  }
  if (args.self_test)
    for (const auto& c : res.checks)
      if (!c.pass) return 4;
  return 0;
}

int run_list(bool as_json) {
  if (as_json) {
    Json j = Json::array();
    for (const auto& e : experiment_catalog()) {
      Json entry;
      entry["name"] = e.name;
      entry["figure"] = e.figure;
      entry["description"] = e.description;
      Json defaults = Json::object();
      for (const auto& k : e.schema) defaults[k.name] = k.fallback;
      entry["defaults"] = defaults;
      j.push_back(entry);
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const auto& e : experiment_catalog()) {
    std::cout << e.name << "  [" << e.figure << "]\n    " << e.description << "\n    defaults:";
    for (const auto& k : e.schema) std::cout << " " << k.name << "=" << k.fallback;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelab: linear water-wave resonance experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  bool list_json = false;

  std::vector<std::pair<std::string, CLI::App*>> cmds;
  for (const auto& e : experiment_catalog()) {
    auto* cmd = app.add_subcommand(e.name, "run the '" + e.name + "' experiment");
    add_common(cmd, args);
    cmds.emplace_back(e.name, cmd);
  }
  auto* list_cmd = app.add_subcommand("list", "list experiments and defaults");
  list_cmd->add_flag("--json", list_json, "machine-readable catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) return run_list(list_json);
    for (const auto& [name, cmd] : cmds)
      if (cmd->parsed()) return run_named(name, args);
  } catch (const wavelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const wavelab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
