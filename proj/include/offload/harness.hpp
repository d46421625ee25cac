#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "offload/agent.hpp"
#include "offload/environment.hpp"
#include "offload/metrics.hpp"
#include "offload/q_table.hpp"

namespace offload {

struct ExperimentConfig {
  EnvConfig env = DefaultEnvConfig();
  LearningParams learn;
  int eval_episodes = 200;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> beta_sweep = {0.1, 0.5, 0.9};
  std::filesystem::path output_dir = "out";
  // Transmit power level used by the edge-only baseline; -1 picks the highest.
  int edge_power_index = -1;

  // Inputs that `Finalize` turns into fields of `env`.
  double noise_density_dbm_per_hz = -174.0;
  double channel_stay_prob = 0.5;
  std::vector<double> channel_transition;  // row-major G x G; empty = use stay prob

  // Rebuilds the derived parts of `env` from the fields above.
  void Finalize();
  void Validate() const;
  int EdgePowerIndex() const;
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one sample
  std::size_t count = 0;

  double StdError() const {
    return count == 0 ? 0.0 : stddev / std::sqrt(static_cast<double>(count));
  }
};

Stat Summarize(std::span<const double> xs);

// Totals of one evaluated time frame.
struct EpisodeTotals {
  double cost = 0.0;
  double power = 0.0;
  double latency = 0.0;
  int epochs = 0;
  int failures = 0;
  int offload_attempts = 0;
  int offload_failures = 0;
  TerminationReason reason = TerminationReason::kHorizon;

  double power_per_epoch() const { return epochs ? power / epochs : 0.0; }
  double latency_per_epoch() const { return epochs ? latency / epochs : 0.0; }
};

struct RunSummary {
  std::string mode;  // "proposed", "local" or "edge"
  double beta = 0.0;
  Stat cost;
  Stat power;
  Stat latency;
  Stat epochs;
  Stat failures;
  Stat power_per_epoch;
  Stat latency_per_epoch;
  // Mean cumulative value after epoch k (index k-1). Frames that ended early
  // hold their final value.
  std::vector<double> mean_cum_power;
  std::vector<double> mean_cum_cost;
  std::vector<double> mean_cum_latency;
  std::vector<EpisodeTotals> episodes;  // seed-major, evaluation-episode-minor
};

// Per-episode learning curve of one seed.
struct ConvergenceSeries {
  std::uint64_t seed = 0;
  std::vector<EpisodeMetrics> episodes;
};

struct TrainingOutput {
  std::vector<QTable> tables;             // aligned with cfg.seeds
  std::vector<ConvergenceSeries> series;  // aligned with cfg.seeds
};

enum class Format { kCsv, kJson };

std::filesystem::path QTablePath(const std::filesystem::path& dir, std::uint64_t seed);
std::filesystem::path ConvergencePath(const std::filesystem::path& dir,
                                      std::uint64_t seed, Format format);

// Trains one agent per seed (in parallel) without touching the filesystem.
TrainingOutput TrainAll(const ExperimentConfig& cfg);

// TrainAll plus one Q-table artifact and one convergence file per seed.
TrainingOutput RunTraining(const ExperimentConfig& cfg, Format format = Format::kCsv);

// Evaluates one policy per seed for cfg.eval_episodes frames each, on the
// evaluation seed stream shared by every mode. A single policy is reused for
// all seeds.
RunSummary EvaluatePolicies(const ExperimentConfig& cfg, const std::string& mode,
                            std::span<const Policy> per_seed);

// Greedy policy from `tables` (one per seed, or a single shared table).
RunSummary EvaluateGreedy(const ExperimentConfig& cfg, std::span<const QTable> tables);

// proposed, local, edge; paired over identical evaluation seeds.
std::array<RunSummary, 3> CompareModes(const ExperimentConfig& cfg,
                                       std::span<const QTable> tables);

// Trains and evaluates the greedy policy for every beta in cfg.beta_sweep.
std::vector<RunSummary> SweepBeta(const ExperimentConfig& cfg);

// Writers. Floats carry 9 significant digits.
void EmitConvergence(const ConvergenceSeries& series, Format format,
                     const std::filesystem::path& path);
void EmitComparison(std::span<const RunSummary> summaries, Format format,
                    const std::filesystem::path& path);
void EmitSweep(std::span<const RunSummary> summaries, Format format,
               const std::filesystem::path& path);

std::string FormatFloat(double v);

}  // namespace offload
