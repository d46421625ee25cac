#include "offload/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "offload/errors.hpp"

namespace offload {

namespace {

double Uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Index in [0, n) from a uniform draw.
int PickUniform(double u, std::size_t n) {
  const auto i = static_cast<std::size_t>(u * static_cast<double>(n));
  return static_cast<int>(std::min(i, n - 1));
}

int PickFromRow(double u, const std::vector<double>& row) {
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] <= 0.0) continue;
    acc += row[j];
    last_positive = static_cast<int>(j);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

}  // namespace

void ChannelChain::Validate() const {
  if (gain_values.empty()) throw ConfigError("gain_values must be nonempty");
  for (std::size_t i = 0; i < gain_values.size(); ++i) {
    if (!(gain_values[i] > 0.0)) throw ConfigError("gain_values must be positive");
    if (i > 0 && !(gain_values[i] > gain_values[i - 1])) {
      throw ConfigError("gain_values must be strictly increasing");
    }
  }
  if (transition.size() != gain_values.size()) {
    throw ConfigError("channel_transition must be G x G");
  }
  for (const auto& row : transition) {
    if (row.size() != gain_values.size()) {
      throw ConfigError("channel_transition must be G x G");
    }
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw ConfigError("channel_transition entries must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("channel_transition rows must sum to 1");
    }
  }
}

ChannelChain ChannelChain::Persistent(std::vector<double> gains, double stay) {
  ChannelChain chain;
  const std::size_t g = gains.size();
  chain.gain_values = std::move(gains);
  chain.transition.assign(g, std::vector<double>(g, 0.0));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      if (g == 1) {
        chain.transition[i][j] = 1.0;
      } else {
        chain.transition[i][j] =
            i == j ? stay : (1.0 - stay) / static_cast<double>(g - 1);
      }
    }
  }
  return chain;
}

const char* ToString(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kHorizon: return "horizon";
    case TerminationReason::kQueueEmpty: return "queue-empty";
    case TerminationReason::kResourceExhausted: return "resource-exhausted";
    case TerminationReason::kTransmissionFailureStop: return "transmission-failure-stop";
  }
  return "unknown";
}

void EnvConfig::Validate() const {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (max_queue < 1) throw ConfigError("max_queue must be >= 1");
  if (!(arrival_prob >= 0.0 && arrival_prob <= 1.0)) {
    throw ConfigError("arrival_prob must lie in [0,1]");
  }
  if (task_sizes_bits.empty()) throw ConfigError("task_sizes_bits must be nonempty");
  for (auto m : task_sizes_bits) {
    if (m <= 0) throw ConfigError("task_sizes_bits must be positive");
  }
  if (resource_bins < 1) throw ConfigError("resource_bins must be >= 1");
  channel.Validate();
  device.Validate(static_cast<double>(MaxTaskBits()));
  edge.Validate();
  radio.Validate(channel.size());
  weights.Validate();
}

std::int64_t EnvConfig::MaxTaskBits() const {
  return task_sizes_bits.empty()
             ? 0
             : *std::max_element(task_sizes_bits.begin(), task_sizes_bits.end());
}

double EnvConfig::MaxLocalCycles() const {
  return device.cycles_per_bit * static_cast<double>(MaxTaskBits());
}

int EnvConfig::StateCount() const {
  return static_cast<int>(channel.size()) * (max_queue + 1) * (resource_bins + 1);
}

int EnvConfig::StateIndex(const NetworkState& s) const {
  return (s.gain_index * (max_queue + 1) + s.queue_len) * (resource_bins + 1) +
         s.resource_bin;
}

NetworkState EnvConfig::StateFromIndex(int index) const {
  NetworkState s;
  s.resource_bin = index % (resource_bins + 1);
  index /= resource_bins + 1;
  s.queue_len = index % (max_queue + 1);
  s.gain_index = index / (max_queue + 1);
  return s;
}

int EnvConfig::ResourceBin(double remaining_cycles) const {
  const double scaled =
      remaining_cycles * resource_bins / device.total_cycle_budget;
  const int bin = static_cast<int>(std::floor(scaled + 1e-9));
  return std::clamp(bin, 0, resource_bins);
}

double EnvConfig::BinLowerCycles(int bin) const {
  return device.total_cycle_budget * bin / resource_bins;
}

EnvConfig DefaultEnvConfig() {
  EnvConfig cfg;
  for (std::int64_t kbits = 10; kbits <= 25; ++kbits) {
    cfg.task_sizes_bits.push_back(kbits * 1000);
  }
  cfg.channel = ChannelChain::Persistent({0.5e-5, 1.0e-5, 1.5e-5}, 0.5);
  cfg.radio.bandwidth_hz = 1e5;
  cfg.radio.noise_power_w = NoisePowerWatts(-174.0, cfg.radio.bandwidth_hz);
  cfg.radio.power_levels_w = {0.025, 0.1};
  cfg.radio.penalty = 1.0;
  cfg.radio.outage_prob = {0.2, 0.1, 0.05};
  return cfg;
}

std::vector<ActionChoice> LegalActions(const NetworkState& state,
                                       double remaining_cycles,
                                       const EnvConfig& cfg) {
  std::vector<ActionChoice> out;
  if (state.queue_len <= 0) return out;
  if (remaining_cycles >= cfg.MaxLocalCycles()) out.push_back(ActionChoice::Local());
  for (std::size_t i = 0; i < cfg.radio.power_levels_w.size(); ++i) {
    out.push_back(ActionChoice::Offload(static_cast<int>(i)));
  }
  return out;
}

std::vector<ActionChoice> LegalActions(const NetworkState& state,
                                       const EnvConfig& cfg) {
  return LegalActions(state, cfg.BinLowerCycles(state.resource_bin), cfg);
}

int SampleChannelTransition(int gain_index, const ChannelChain& chain, Rng& rng) {
  return PickFromRow(Uniform01(rng), chain.transition.at(gain_index));
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.rng_seed) {
  cfg_.Validate();
}

NetworkState Environment::Reset(std::uint64_t seed) {
  rng_.seed(seed);
  state_.gain_index = PickUniform(Uniform01(rng_), cfg_.channel.size());
  state_.queue_len = cfg_.max_queue;
  remaining_cycles_ = cfg_.device.total_cycle_budget;
  state_.resource_bin = cfg_.resource_bins;
  epoch_ = 1;
  done_ = false;
  return state_;
}

std::vector<ActionChoice> Environment::LegalActions() const {
  if (done_) return {};
  return offload::LegalActions(state_, remaining_cycles_, cfg_);
}

StepOutcome Environment::Step(std::optional<ActionChoice> action) {
  if (done_) throw IllegalAction("step called on a finished episode");

  // Every epoch consumes the same four draws so that different policies see
  // the same task sizes, arrivals and channel path under a shared seed.
  const double u_size = Uniform01(rng_);
  const double u_outage = Uniform01(rng_);
  const double u_arrival = Uniform01(rng_);

  StepOutcome out;
  const bool has_task = state_.queue_len > 0 && action.has_value();
  if (has_task) {
    const ActionChoice& a = *action;
    if (a.kind == ActionChoice::Kind::kLocal) {
      if (remaining_cycles_ < cfg_.MaxLocalCycles()) {
        throw IllegalAction("local execution with insufficient cycle budget");
      }
    } else if (a.power_index < 0 ||
               a.power_index >= static_cast<int>(cfg_.radio.power_levels_w.size())) {
      throw IllegalAction("offload power index out of range: " +
                          std::to_string(a.power_index));
    }

    TaskSpec task{cfg_.task_sizes_bits[PickUniform(u_size, cfg_.task_sizes_bits.size())]};
    out.task = task;
    if (a.kind == ActionChoice::Kind::kLocal) {
      const CostBreakdown c = LocalCost(task, cfg_.device, cfg_.weights);
      remaining_cycles_ -= cfg_.device.cycles_per_bit * static_cast<double>(task.size_bits);
      out.kind = OutcomeKind::kLocalSuccess;
      out.power = c.power;
      out.latency = c.latency;
      out.cost = StepCost(out.kind, c, cfg_.radio);
    } else if (u_outage < cfg_.radio.outage_prob[state_.gain_index]) {
      out.kind = OutcomeKind::kOffloadFailure;
      out.cost = StepCost(out.kind, {}, cfg_.radio);
    } else {
      const CostBreakdown c = OffloadCost(
          task, cfg_.radio.power_levels_w[a.power_index],
          cfg_.channel.gain_values[state_.gain_index], cfg_.edge, cfg_.radio,
          cfg_.weights);
      out.kind = OutcomeKind::kOffloadSuccess;
      out.power = c.power;
      out.latency = c.latency;
      out.cost = StepCost(out.kind, c, cfg_.radio);
    }
  }

  const int arrival = u_arrival < cfg_.arrival_prob ? 1 : 0;
  int queue = state_.queue_len - (has_task ? 1 : 0) + arrival;
  queue = std::min(queue, cfg_.max_queue);

  const bool exhausted = remaining_cycles_ < cfg_.MaxLocalCycles();
  if (exhausted && cfg_.charge_unserved_on_exhaustion && queue > 0) {
    out.dropped_tasks = queue;
    out.cost += cfg_.radio.penalty * queue;
    queue = 0;
  }

  state_.gain_index = SampleChannelTransition(state_.gain_index, cfg_.channel, rng_);
  state_.queue_len = queue;
  state_.resource_bin = cfg_.ResourceBin(remaining_cycles_);

  if (exhausted) {
    out.reason = TerminationReason::kResourceExhausted;
  } else if (queue == 0) {
    out.reason = TerminationReason::kQueueEmpty;
  } else if (cfg_.stop_on_transmission_failure &&
             out.kind == OutcomeKind::kOffloadFailure) {
    out.reason = TerminationReason::kTransmissionFailureStop;
  } else if (epoch_ >= cfg_.horizon) {
    out.reason = TerminationReason::kHorizon;
  }
  out.terminal = out.reason.has_value();
  done_ = out.terminal;
  out.next_state = state_;
  out.remaining_cycles = remaining_cycles_;
  ++epoch_;
  return out;
}

}  // namespace offload
