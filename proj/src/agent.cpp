#include "offload/agent.hpp"

#include <algorithm>
#include <cmath>

#include "offload/errors.hpp"

namespace offload {

namespace {

constexpr std::uint64_t kTrainStream = 0x747261696eULL;  // "train"
constexpr std::uint64_t kAgentStream = 0x6167656e74ULL;  // "agent"

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ActionChoice ArgMin(const QTable& q, int state_index,
                    std::span<const ActionChoice> legal) {
  ActionChoice best = legal.front();
  double best_value = q.at(state_index, best.Index());
  for (const ActionChoice& a : legal.subspan(1)) {
    const double v = q.at(state_index, a.Index());
    if (v < best_value || (v == best_value && a.Index() < best.Index())) {
      best = a;
      best_value = v;
    }
  }
  return best;
}

}  // namespace

void EpisodeMetrics::Record(const StepOutcome& out) {
  epochs.push_back({out.cost, out.power, out.latency, out.kind, out.dropped_tasks});
  total_cost += out.cost;
  total_power += out.power;
  total_latency += out.latency;
  if (out.kind == OutcomeKind::kOffloadSuccess ||
      out.kind == OutcomeKind::kOffloadFailure) {
    ++offload_attempts;
  }
  if (out.kind == OutcomeKind::kOffloadFailure) ++offload_failures;
  failures += (out.kind == OutcomeKind::kOffloadFailure ? 1 : 0) + out.dropped_tasks;
  if (out.reason) reason = *out.reason;
}

void LearningParams::Validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0,1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0,1]");
  if (episodes < 0) throw ConfigError("episodes must be >= 0");
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  return SplitMix64(SplitMix64(SplitMix64(base) ^ stream) ^ index);
}

ActionChoice SelectAction(const QTable& q, int state_index,
                          std::span<const ActionChoice> legal, double epsilon,
                          Rng& rng) {
  if (legal.empty()) throw NoLegalAction("no legal action to select");
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      return legal[pick(rng)];
    }
  }
  return ArgMin(q, state_index, legal);
}

double MinQ(const QTable& q, int state_index, std::span<const ActionChoice> legal) {
  if (legal.empty()) return 0.0;
  return q.at(state_index, ArgMin(q, state_index, legal).Index());
}

double UpdateQ(QTable& q, int state_index, const ActionChoice& action, double cost,
               int next_state_index, std::span<const ActionChoice> legal_next,
               bool terminal, double alpha, double gamma) {
  const double bootstrap = terminal ? 0.0 : MinQ(q, next_state_index, legal_next);
  double& entry = q.at(state_index, action.Index());
  entry = (1.0 - alpha) * entry + alpha * (cost + gamma * bootstrap);
  return entry;
}

std::optional<ActionChoice> Policy::Choose(const EnvConfig& cfg,
                                           const NetworkState& state,
                                           std::span<const ActionChoice> legal,
                                           Rng& rng) const {
  if (legal.empty()) return std::nullopt;
  const auto contains = [&](const ActionChoice& a) {
    return std::find(legal.begin(), legal.end(), a) != legal.end();
  };
  return std::visit(
      [&](const auto& m) -> std::optional<ActionChoice> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Greedy>) {
          return ArgMin(*m.q, cfg.StateIndex(state), legal);
        } else if constexpr (std::is_same_v<M, EpsilonGreedy>) {
          return SelectAction(*m.q, cfg.StateIndex(state), legal, m.epsilon, rng);
        } else if constexpr (std::is_same_v<M, LocalOnly>) {
          const auto a = ActionChoice::Local();
          return contains(a) ? std::optional(a) : std::nullopt;
        } else {
          const auto a = ActionChoice::Offload(m.power_index);
          return contains(a) ? std::optional(a) : std::nullopt;
        }
      },
      mode_);
}

Policy GreedyPolicy(QTable q) {
  return GreedyPolicy(std::make_shared<const QTable>(std::move(q)));
}

Policy GreedyPolicy(std::shared_ptr<const QTable> q) {
  return Policy(Policy::Greedy{std::move(q)});
}

Policy BaselinePolicy(BaselineKind kind, int power_index) {
  if (kind == BaselineKind::kLocalOnly) return Policy(Policy::LocalOnly{});
  if (power_index < 0) throw ConfigError("edge power index must be >= 0");
  return Policy(Policy::EdgeOnly{power_index});
}

EpisodeMetrics RunEpisode(Environment& env, const Policy& policy, std::uint64_t seed,
                          Rng& policy_rng) {
  EpisodeMetrics m;
  NetworkState state = env.Reset(seed);
  while (!env.done()) {
    const auto legal = env.LegalActions();
    const auto action = policy.Choose(env.config(), state, legal, policy_rng);
    const StepOutcome out = env.Step(action);
    m.Record(out);
    state = out.next_state;
  }
  return m;
}

TrainResult Train(const EnvConfig& env_cfg, const LearningParams& params,
                  std::uint64_t seed) {
  env_cfg.Validate();
  params.Validate();
  TrainResult result{QTable(env_cfg), {}, {}};
  result.episodes.reserve(params.episodes);

  QTable& q = result.q;
  std::vector<std::uint32_t>& visits = result.visits;
  visits.assign(q.values().size(), 0);

  Environment env(env_cfg);
  Rng agent_rng(DeriveSeed(seed, kAgentStream, 0));
  for (int e = 0; e < params.episodes; ++e) {
    EpisodeMetrics metrics;
    NetworkState state = env.Reset(DeriveSeed(seed, kTrainStream, e));
    while (!env.done()) {
      const auto legal = env.LegalActions();
      if (legal.empty()) {
        // Nothing to act on: the epoch idles and no entry is updated.
        metrics.Record(env.Step(std::nullopt));
        state = env.state();
        continue;
      }
      const int s = env_cfg.StateIndex(state);
      const ActionChoice a = SelectAction(q, s, legal, params.epsilon, agent_rng);
      const StepOutcome out = env.Step(a);
      metrics.Record(out);

      const auto n = ++visits[static_cast<std::size_t>(s) * q.action_count() + a.Index()];
      double alpha = params.alpha;
      if (params.alpha_schedule == AlphaSchedule::kInverseVisits) {
        alpha = params.alpha / (1.0 + params.alpha * (n - 1.0));
      }
      const auto legal_next = env.LegalActions();
      UpdateQ(q, s, a, out.cost, env_cfg.StateIndex(out.next_state), legal_next,
              out.terminal, alpha, params.gamma);
      state = out.next_state;
    }
    result.episodes.push_back(std::move(metrics));
  }
  return result;
}

}  // namespace offload
