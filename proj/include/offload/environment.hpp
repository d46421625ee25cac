#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "offload/cost_model.hpp"

namespace offload {

using Rng = std::mt19937_64;

// Finite-state Markov chain over discrete channel-gain levels.
struct ChannelChain {
  std::vector<double> gain_values;               // strictly increasing
  std::vector<std::vector<double>> transition;   // row-stochastic, G x G

  std::size_t size() const { return gain_values.size(); }
  void Validate() const;

  // Stays put with probability `stay`, otherwise moves uniformly to one of the
  // other states.
  static ChannelChain Persistent(std::vector<double> gains, double stay);
};

struct NetworkState {
  int gain_index = 0;
  int queue_len = 0;
  int resource_bin = 0;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

struct ActionChoice {
  enum class Kind { kLocal, kOffload };

  Kind kind = Kind::kLocal;
  int power_index = 0;  // only meaningful for kOffload

  static ActionChoice Local() { return {Kind::kLocal, 0}; }
  static ActionChoice Offload(int power_index) { return {Kind::kOffload, power_index}; }

  // Column in the Q-table: 0 for local, 1 + power_index for offloading.
  int Index() const { return kind == Kind::kLocal ? 0 : 1 + power_index; }
  static ActionChoice FromIndex(int index) {
    return index == 0 ? Local() : Offload(index - 1);
  }

  friend bool operator==(const ActionChoice&, const ActionChoice&) = default;
};

enum class TerminationReason {
  kHorizon,
  kQueueEmpty,
  kResourceExhausted,
  kTransmissionFailureStop,
};

const char* ToString(TerminationReason reason);

struct EnvConfig {
  int horizon = 15;                                // K, epochs per time frame
  int max_queue = 9;                               // T_max, tasks
  double arrival_prob = 0.5;                       // P(one task arrives per epoch)
  std::vector<std::int64_t> task_sizes_bits;       // M
  ChannelChain channel;
  DeviceProfile device;
  EdgeProfile edge;
  RadioProfile radio;
  CostWeights weights;
  int resource_bins = 10;                          // Q-table resolution of the budget
  std::uint64_t rng_seed = 1;
  // Tasks still queued when the cycle budget runs out are dropped and each is
  // charged the failure penalty.
  bool charge_unserved_on_exhaustion = true;
  // End the time frame on the first failed transmission.
  bool stop_on_transmission_failure = false;

  void Validate() const;

  std::int64_t MaxTaskBits() const;
  // Cycles one local execution of the largest task needs.
  double MaxLocalCycles() const;
  int StateCount() const;
  int ActionCount() const { return 1 + static_cast<int>(radio.power_levels_w.size()); }
  int StateIndex(const NetworkState& s) const;
  NetworkState StateFromIndex(int index) const;
  int ResourceBin(double remaining_cycles) const;
  // Smallest budget that maps to `bin`.
  double BinLowerCycles(int bin) const;
};

// Reference parameter set, with chosen values for the quantities it leaves open.
EnvConfig DefaultEnvConfig();

struct StepOutcome {
  OutcomeKind kind = OutcomeKind::kIdle;
  std::optional<TaskSpec> task;
  double power = 0.0;
  double latency = 0.0;
  double cost = 0.0;
  int dropped_tasks = 0;       // unserved tasks charged at resource exhaustion
  NetworkState next_state;
  double remaining_cycles = 0.0;
  bool terminal = false;
  std::optional<TerminationReason> reason;  // set iff terminal
};

// Actions available in `state` given the exact remaining cycle budget.
std::vector<ActionChoice> LegalActions(const NetworkState& state,
                                       double remaining_cycles,
                                       const EnvConfig& cfg);
// Same, assuming the lowest budget consistent with the state's resource bin.
std::vector<ActionChoice> LegalActions(const NetworkState& state,
                                       const EnvConfig& cfg);

int SampleChannelTransition(int gain_index, const ChannelChain& chain, Rng& rng);

// One end device, one time frame at a time. Owns its random stream.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  NetworkState Reset(std::uint64_t seed);

  // Runs epoch k. An empty action (or an empty queue) makes the epoch idle.
  StepOutcome Step(std::optional<ActionChoice> action);

  std::vector<ActionChoice> LegalActions() const;

  const EnvConfig& config() const { return cfg_; }
  const NetworkState& state() const { return state_; }
  double remaining_cycles() const { return remaining_cycles_; }
  int epoch() const { return epoch_; }
  bool done() const { return done_; }

 private:
  EnvConfig cfg_;
  Rng rng_;
  NetworkState state_;
  double remaining_cycles_ = 0.0;
  int epoch_ = 1;
  bool done_ = true;
};

}  // namespace offload
