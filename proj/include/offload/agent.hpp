#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "offload/environment.hpp"
#include "offload/metrics.hpp"
#include "offload/q_table.hpp"

namespace offload {

enum class AlphaSchedule {
  kConstant,       // alpha on every update
  kInverseVisits,  // alpha / (1 + alpha (n - 1)) on the n-th visit of (s, a)
};

struct LearningParams {
  double gamma = 0.5;
  double alpha = 0.5;
  double epsilon = 0.1;
  int episodes = 2000;
  AlphaSchedule alpha_schedule = AlphaSchedule::kConstant;

  void Validate() const;
};

// Deterministic 64-bit seed for stream `stream`, item `index` under `base`.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream, std::uint64_t index);

// Epsilon-greedy over `legal`: uniform with probability epsilon, otherwise the
// lowest-cost action with ties going to the lowest action index.
// Throws NoLegalAction when `legal` is empty.
ActionChoice SelectAction(const QTable& q, int state_index,
                          std::span<const ActionChoice> legal, double epsilon,
                          Rng& rng);

// min over `legal` of Q(state, .); zero when `legal` is empty.
double MinQ(const QTable& q, int state_index, std::span<const ActionChoice> legal);

// One-step Q-learning update of entry (state, action). Bootstraps from zero when
// `terminal` is set or `legal_next` is empty. Returns the new entry value.
double UpdateQ(QTable& q, int state_index, const ActionChoice& action, double cost,
               int next_state_index, std::span<const ActionChoice> legal_next,
               bool terminal, double alpha, double gamma);

class Policy {
 public:
  struct Greedy {
    std::shared_ptr<const QTable> q;
  };
  struct EpsilonGreedy {
    std::shared_ptr<const QTable> q;
    double epsilon = 0.1;
  };
  struct LocalOnly {};
  struct EdgeOnly {
    int power_index = 0;
  };
  using Mode = std::variant<Greedy, EpsilonGreedy, LocalOnly, EdgeOnly>;

  explicit Policy(Mode mode) : mode_(std::move(mode)) {}

  // Empty when the policy has nothing it is willing to do (the epoch idles).
  std::optional<ActionChoice> Choose(const EnvConfig& cfg, const NetworkState& state,
                                     std::span<const ActionChoice> legal,
                                     Rng& rng) const;

  const Mode& mode() const { return mode_; }

 private:
  Mode mode_;
};

Policy GreedyPolicy(QTable q);
Policy GreedyPolicy(std::shared_ptr<const QTable> q);

enum class BaselineKind { kLocalOnly, kEdgeOnly };
Policy BaselinePolicy(BaselineKind kind, int power_index = 0);

// Rolls one time frame under `policy` from Reset(seed).
EpisodeMetrics RunEpisode(Environment& env, const Policy& policy, std::uint64_t seed,
                          Rng& policy_rng);

struct TrainResult {
  QTable q;
  std::vector<EpisodeMetrics> episodes;
  std::vector<std::uint32_t> visits;  // update count per Q-table entry
};

// Epsilon-greedy tabular Q-learning over `params.episodes` time frames.
TrainResult Train(const EnvConfig& env_cfg, const LearningParams& params,
                  std::uint64_t seed);

// Explicit finite MDP: for every available (state, action) the full outcome
// distribution of immediate cost and successor.
struct MdpTransition {
  double prob = 0.0;
  double cost = 0.0;
  int next_state = 0;
  bool terminal = false;  // no cost-to-go after this outcome
};

struct FiniteMdp {
  int state_count = 0;
  int action_count = 0;
  // Indexed by state * action_count + action. An empty list marks the action
  // as unavailable in that state.
  std::vector<std::vector<MdpTransition>> outcomes;

  bool available(int s, int a) const {
    return !outcomes[static_cast<std::size_t>(s) * action_count + a].empty();
  }
};

// Backward induction Q_h(s,a) = E[C + gamma min_a' Q_{h-1}(s',a')], Q_0 = 0.
// Unavailable entries stay at zero.
QTable SolveFiniteHorizon(const FiniteMdp& mdp, double gamma, int horizon);

// Enumerates the offloading environment's dynamics: uniform task size,
// outage, arrival and channel move. The epoch limit K is not part of the
// state and is not modelled. Requires every local execution to consume a
// whole number of resource bins, so the bin is the exact budget; throws
// ConfigError otherwise and TooLarge beyond 1e5 state-action pairs.
FiniteMdp BuildOffloadMdp(const EnvConfig& env_cfg);

// Exact Q* of the offloading MDP over `horizon` stages.
QTable ValueIterationOracle(const EnvConfig& env_cfg, double gamma, int horizon);

}  // namespace offload
