#include "offload/harness.hpp"

#include <future>
#include <numeric>

#include "offload/errors.hpp"

namespace offload {

namespace {

constexpr std::uint64_t kEvalStream = 0x6576616cULL;    // "eval"
constexpr std::uint64_t kPolicyStream = 0x706f6cULL;    // "pol"

// Runs fn(i) for i in [0, n) concurrently and returns results in index order.
template <typename Fn>
auto ParallelMap(std::size_t n, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::future<R>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    futures.push_back(std::async(std::launch::async, fn, i));
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

EpisodeTotals ToTotals(const EpisodeMetrics& m) {
  EpisodeTotals t;
  t.cost = m.total_cost;
  t.power = m.total_power;
  t.latency = m.total_latency;
  t.epochs = m.epochs_executed();
  t.failures = m.failures;
  t.offload_attempts = m.offload_attempts;
  t.offload_failures = m.offload_failures;
  t.reason = m.reason;
  return t;
}

}  // namespace

void ExperimentConfig::Finalize() {
  env.radio.noise_power_w =
      NoisePowerWatts(noise_density_dbm_per_hz, env.radio.bandwidth_hz);
  const std::size_t g = env.channel.gain_values.size();
  if (channel_transition.empty()) {
    env.channel = ChannelChain::Persistent(env.channel.gain_values, channel_stay_prob);
  } else {
    if (channel_transition.size() != g * g) {
      throw ConfigError("channel_transition must have G*G entries");
    }
    env.channel.transition.assign(g, std::vector<double>(g));
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) {
        env.channel.transition[i][j] = channel_transition[i * g + j];
      }
    }
  }
}

void ExperimentConfig::Validate() const {
  env.Validate();
  learn.Validate();
  if (!(channel_stay_prob >= 0.0 && channel_stay_prob <= 1.0)) {
    throw ConfigError("channel_stay_prob must lie in [0,1]");
  }
  if (seeds.empty()) throw ConfigError("seeds must be nonempty");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  for (double b : beta_sweep) {
    if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("beta_sweep values must lie in [0,1]");
  }
  const int levels = static_cast<int>(env.radio.power_levels_w.size());
  if (edge_power_index < -1 || edge_power_index >= levels) {
    throw ConfigError("edge_power_index out of range");
  }
}

int ExperimentConfig::EdgePowerIndex() const {
  return edge_power_index >= 0
             ? edge_power_index
             : static_cast<int>(env.radio.power_levels_w.size()) - 1;
}

Stat Summarize(std::span<const double> xs) {
  Stat s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::filesystem::path QTablePath(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("qtable_seed" + std::to_string(seed) + ".txt");
}

std::filesystem::path ConvergencePath(const std::filesystem::path& dir,
                                      std::uint64_t seed, Format format) {
  return dir / ("convergence_seed" + std::to_string(seed) +
                (format == Format::kCsv ? ".csv" : ".json"));
}

TrainingOutput TrainAll(const ExperimentConfig& cfg) {
  cfg.Validate();
  auto results = ParallelMap(cfg.seeds.size(), [&](std::size_t i) {
    return Train(cfg.env, cfg.learn, cfg.seeds[i]);
  });
  TrainingOutput out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    out.tables.push_back(std::move(results[i].q));
    out.series.push_back({cfg.seeds[i], std::move(results[i].episodes)});
  }
  return out;
}

TrainingOutput RunTraining(const ExperimentConfig& cfg, Format format) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());
  TrainingOutput out = TrainAll(cfg);
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    out.tables[i].Save(QTablePath(cfg.output_dir, cfg.seeds[i]));
    EmitConvergence(out.series[i], format,
                    ConvergencePath(cfg.output_dir, cfg.seeds[i], format));
  }
  return out;
}

RunSummary EvaluatePolicies(const ExperimentConfig& cfg, const std::string& mode,
                            std::span<const Policy> per_seed) {
  cfg.Validate();
  if (per_seed.size() != 1 && per_seed.size() != cfg.seeds.size()) {
    throw DimensionMismatch("need one policy, or one per seed");
  }
  const auto per_seed_totals = ParallelMap(cfg.seeds.size(), [&](std::size_t i) {
    const Policy& policy = per_seed.size() == 1 ? per_seed[0] : per_seed[i];
    Environment env(cfg.env);
    std::vector<EpisodeMetrics> runs;
    runs.reserve(cfg.eval_episodes);
    for (int e = 0; e < cfg.eval_episodes; ++e) {
      Rng policy_rng(DeriveSeed(cfg.seeds[i], kPolicyStream, e));
      runs.push_back(
          RunEpisode(env, policy, DeriveSeed(cfg.seeds[i], kEvalStream, e), policy_rng));
    }
    return runs;
  });

  const int horizon = cfg.env.horizon;
  RunSummary summary;
  summary.mode = mode;
  summary.beta = cfg.env.weights.beta;
  summary.mean_cum_power.assign(horizon, 0.0);
  summary.mean_cum_latency.assign(horizon, 0.0);
  summary.mean_cum_cost.assign(horizon, 0.0);

  std::vector<double> cost, power, latency, epochs, failures, power_rate, latency_rate;
  for (const auto& runs : per_seed_totals) {
    for (const EpisodeMetrics& m : runs) {
      const EpisodeTotals t = ToTotals(m);
      summary.episodes.push_back(t);
      cost.push_back(t.cost);
      power.push_back(t.power);
      latency.push_back(t.latency);
      epochs.push_back(t.epochs);
      failures.push_back(t.failures);
      power_rate.push_back(t.power_per_epoch());
      latency_rate.push_back(t.latency_per_epoch());

      double cp = 0.0, cl = 0.0, cc = 0.0;
      for (int k = 0; k < horizon; ++k) {
        if (k < m.epochs_executed()) {
          cp += m.epochs[k].power;
          cl += m.epochs[k].latency;
          cc += m.epochs[k].cost;
        }
        summary.mean_cum_power[k] += cp;
        summary.mean_cum_latency[k] += cl;
        summary.mean_cum_cost[k] += cc;
      }
    }
  }
  const double n = static_cast<double>(summary.episodes.size());
  for (int k = 0; k < horizon; ++k) {
    summary.mean_cum_power[k] /= n;
    summary.mean_cum_latency[k] /= n;
    summary.mean_cum_cost[k] /= n;
  }
  summary.cost = Summarize(cost);
  summary.power = Summarize(power);
  summary.latency = Summarize(latency);
  summary.epochs = Summarize(epochs);
  summary.failures = Summarize(failures);
  summary.power_per_epoch = Summarize(power_rate);
  summary.latency_per_epoch = Summarize(latency_rate);
  return summary;
}

RunSummary EvaluateGreedy(const ExperimentConfig& cfg, std::span<const QTable> tables) {
  std::vector<Policy> policies;
  for (const QTable& q : tables) {
    if (!q.Matches(cfg.env)) {
      throw DimensionMismatch("Q-table is " + std::to_string(q.state_count()) + "x" +
                              std::to_string(q.action_count()) + ", config needs " +
                              std::to_string(cfg.env.StateCount()) + "x" +
                              std::to_string(cfg.env.ActionCount()));
    }
    policies.push_back(GreedyPolicy(q));
  }
  return EvaluatePolicies(cfg, "proposed", policies);
}

std::array<RunSummary, 3> CompareModes(const ExperimentConfig& cfg,
                                       std::span<const QTable> tables) {
  const Policy local = BaselinePolicy(BaselineKind::kLocalOnly);
  const Policy edge = BaselinePolicy(BaselineKind::kEdgeOnly, cfg.EdgePowerIndex());
  return {EvaluateGreedy(cfg, tables), EvaluatePolicies(cfg, "local", {&local, 1}),
          EvaluatePolicies(cfg, "edge", {&edge, 1})};
}

std::vector<RunSummary> SweepBeta(const ExperimentConfig& cfg) {
  if (cfg.beta_sweep.empty()) throw ConfigError("beta_sweep must be nonempty");
  std::vector<RunSummary> out;
  for (double beta : cfg.beta_sweep) {
    ExperimentConfig run = cfg;
    run.env.weights.beta = beta;
    const TrainingOutput trained = TrainAll(run);
    out.push_back(EvaluateGreedy(run, trained.tables));
  }
  return out;
}

}  // namespace offload
