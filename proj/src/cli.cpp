#include "offload/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "offload/config.hpp"
#include "offload/errors.hpp"
#include "offload/harness.hpp"

namespace offload {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string format = "csv";
};

std::string KeysFooter() {
  std::string text = "\nConfig keys (--set KEY=VALUE or in the --config file):\n";
  for (const ConfigKey& k : ConfigKeys()) {
    char line[256];
    std::snprintf(line, sizeof(line), "  %-30s [%s] %s\n", k.name.c_str(), k.unit.c_str(),
                  k.description.c_str());
    text += line;
  }
  return text;
}

void AddCommonOptions(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "config file (defaults built in)");
  cmd->add_option("--seed", opt.seed, "run a single seed instead of the seeds list");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--set", opt.overrides, "override a config key, KEY=VALUE")
      ->allow_extra_args(false);
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->footer(KeysFooter());
}

ExperimentConfig BuildConfig(const Options& opt) {
  ExperimentConfig cfg;
  if (!opt.config_path.empty()) cfg = LoadConfig(opt.config_path);
  for (const std::string& o : opt.overrides) ApplyOverride(cfg, o);
  if (opt.seed) cfg.seeds = {*opt.seed};
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  cfg.Finalize();
  cfg.Validate();
  return cfg;
}

std::vector<QTable> LoadTables(const ExperimentConfig& cfg, std::ostream& err) {
  std::vector<QTable> tables;
  const std::uint64_t expected_hash = ConfigHash(cfg.env);
  for (std::uint64_t seed : cfg.seeds) {
    const auto path = QTablePath(cfg.output_dir, seed);
    if (!std::filesystem::exists(path)) {
      throw ConfigError("missing Q-table artifact " + path.string() +
                        " (run `train` first)");
    }
    QTable q = QTable::Load(path);
    if (q.config_hash() != expected_hash) {
      err << "warning: " << path.string()
          << " was trained under a different configuration\n";
    }
    tables.push_back(std::move(q));
  }
  return tables;
}

void PrintSummary(std::ostream& out, const RunSummary& s) {
  char line[256];
  std::snprintf(line, sizeof(line),
                "%-8s beta=%s cost=%s power=%s latency=%s epochs=%s failures=%s\n",
                s.mode.c_str(), FormatFloat(s.beta).c_str(),
                FormatFloat(s.cost.mean).c_str(), FormatFloat(s.power.mean).c_str(),
                FormatFloat(s.latency.mean).c_str(), FormatFloat(s.epochs.mean).c_str(),
                FormatFloat(s.failures.mean).c_str());
  out << line;
}

std::filesystem::path OutputFile(const ExperimentConfig& cfg, const std::string& stem,
                                 Format format) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());
  return cfg.output_dir / (stem + (format == Format::kCsv ? ".csv" : ".json"));
}

int Dispatch(const std::string& command, const Options& opt, std::ostream& out,
             std::ostream& err) {
  const ExperimentConfig cfg = BuildConfig(opt);
  const Format format = opt.format == "json" ? Format::kJson : Format::kCsv;

  if (command == "train") {
    const TrainingOutput trained = RunTraining(cfg, format);
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      const auto& eps = trained.series[i].episodes;
      const std::size_t window = std::min<std::size_t>(100, eps.size());
      double tail = 0.0;
      for (std::size_t e = eps.size() - window; e < eps.size(); ++e) {
        tail += eps[e].average_cost();
      }
      out << "seed " << cfg.seeds[i] << ": " << eps.size()
          << " episodes, last-" << window << " mean avg_cost "
          << FormatFloat(window ? tail / window : 0.0) << ", wrote "
          << QTablePath(cfg.output_dir, cfg.seeds[i]).string() << '\n';
    }
    return kExitOk;
  }
  if (command == "eval") {
    const auto tables = LoadTables(cfg, err);
    const RunSummary s = EvaluateGreedy(cfg, tables);
    EmitComparison({&s, 1}, format, OutputFile(cfg, "eval", format));
    PrintSummary(out, s);
    return kExitOk;
  }
  if (command == "compare") {
    const auto tables = LoadTables(cfg, err);
    const auto summaries = CompareModes(cfg, tables);
    EmitComparison(summaries, format, OutputFile(cfg, "comparison", format));
    for (const RunSummary& s : summaries) PrintSummary(out, s);
    return kExitOk;
  }
  const auto summaries = SweepBeta(cfg);
  EmitSweep(summaries, format, OutputFile(cfg, "sweep", format));
  for (const RunSummary& s : summaries) PrintSummary(out, s);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Task offloading simulator with a tabular Q-learning agent",
               "offload_sim"};
  app.require_subcommand(1, 1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"train", "train one Q-table per seed and write learning curves"},
      {"eval", "evaluate the greedy policy of trained Q-tables"},
      {"compare", "compare the learned policy with local-only and edge-only"},
      {"sweep", "train and evaluate for every beta in beta_sweep"},
  };
  for (const auto& [name, help] : commands) {
    AddCommonOptions(app.add_subcommand(name, help), opt);
  }

  std::vector<std::string> argv_storage = {"offload_sim"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Dispatch(command, opt, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace offload
