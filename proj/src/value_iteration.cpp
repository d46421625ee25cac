#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "offload/agent.hpp"
#include "offload/errors.hpp"

namespace offload {

namespace {

constexpr long long kMaxPairs = 100000;

// Number of whole bins one local execution of `bits` consumes, or -1.
int BinsConsumed(const EnvConfig& cfg, std::int64_t bits) {
  const double width = cfg.device.total_cycle_budget / cfg.resource_bins;
  const double ratio = cfg.device.cycles_per_bit * static_cast<double>(bits) / width;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    return -1;
  }
  return static_cast<int>(rounded);
}

}  // namespace

QTable SolveFiniteHorizon(const FiniteMdp& mdp, double gamma, int horizon) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
  if (horizon < 0) throw ConfigError("horizon must be >= 0");
  QTable prev(mdp.state_count, mdp.action_count);
  QTable next(mdp.state_count, mdp.action_count);
  std::vector<double> value(mdp.state_count, 0.0);

  for (int h = 1; h <= horizon; ++h) {
    for (int s = 0; s < mdp.state_count; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.action_count; ++a) {
        if (mdp.available(s, a)) best = std::min(best, prev.at(s, a));
      }
      value[s] = std::isfinite(best) ? best : 0.0;
    }
    for (int s = 0; s < mdp.state_count; ++s) {
      for (int a = 0; a < mdp.action_count; ++a) {
        double q = 0.0;
        for (const MdpTransition& t :
             mdp.outcomes[static_cast<std::size_t>(s) * mdp.action_count + a]) {
          q += t.prob * (t.cost + (t.terminal ? 0.0 : gamma * value[t.next_state]));
        }
        next.at(s, a) = q;
      }
    }
    std::swap(prev, next);
  }
  return prev;
}

FiniteMdp BuildOffloadMdp(const EnvConfig& cfg) {
  cfg.Validate();
  const long long pairs =
      static_cast<long long>(cfg.StateCount()) * cfg.ActionCount();
  if (pairs > kMaxPairs) {
    throw TooLarge("state-action space of " + std::to_string(pairs) +
                   " pairs exceeds the enumeration bound");
  }

  const std::size_t n_sizes = cfg.task_sizes_bits.size();
  std::vector<int> bins_used(n_sizes);
  for (std::size_t i = 0; i < n_sizes; ++i) {
    bins_used[i] = BinsConsumed(cfg, cfg.task_sizes_bits[i]);
    if (bins_used[i] < 0) {
      throw ConfigError(
          "oracle needs every local execution to consume whole resource bins");
    }
  }

  const int n_gain = static_cast<int>(cfg.channel.size());
  const double size_prob = 1.0 / static_cast<double>(n_sizes);
  const double max_cycles = cfg.MaxLocalCycles();
  const double penalty = cfg.radio.penalty;

  FiniteMdp mdp;
  mdp.state_count = cfg.StateCount();
  mdp.action_count = cfg.ActionCount();
  mdp.outcomes.resize(static_cast<std::size_t>(pairs));

  // Appends the arrival and channel branches that follow a handled task.
  const auto branch = [&](std::vector<MdpTransition>& out, double prob, int gain,
                          int queue_after, int bin, bool failed, double step_cost) {
    const bool exhausted = cfg.BinLowerCycles(bin) < max_cycles;
    for (int arrival = 0; arrival <= 1; ++arrival) {
      const double p_arr = arrival ? cfg.arrival_prob : 1.0 - cfg.arrival_prob;
      if (p_arr == 0.0) continue;
      int queue = std::min(queue_after + arrival, cfg.max_queue);
      double cost = step_cost;
      if (exhausted && cfg.charge_unserved_on_exhaustion && queue > 0) {
        cost += penalty * queue;
        queue = 0;
      }
      const bool terminal =
          exhausted || queue == 0 || (failed && cfg.stop_on_transmission_failure);
      for (int g2 = 0; g2 < n_gain; ++g2) {
        const double p_g = cfg.channel.transition[gain][g2];
        if (p_g == 0.0) continue;
        out.push_back({prob * p_arr * p_g, cost, cfg.StateIndex({g2, queue, bin}),
                       terminal});
      }
    }
  };

  for (int s = 0; s < mdp.state_count; ++s) {
    const NetworkState st = cfg.StateFromIndex(s);
    for (const ActionChoice& a : LegalActions(st, cfg)) {
      auto& out = mdp.outcomes[static_cast<std::size_t>(s) * mdp.action_count + a.Index()];
      for (std::size_t i = 0; i < n_sizes; ++i) {
        const TaskSpec task{cfg.task_sizes_bits[i]};
        if (a.kind == ActionChoice::Kind::kLocal) {
          branch(out, size_prob, st.gain_index, st.queue_len - 1,
                 st.resource_bin - bins_used[i], false,
                 LocalCost(task, cfg.device, cfg.weights).cost);
          continue;
        }
        const double outage = cfg.radio.outage_prob[st.gain_index];
        if (outage < 1.0) {
          const double c =
              OffloadCost(task, cfg.radio.power_levels_w[a.power_index],
                          cfg.channel.gain_values[st.gain_index], cfg.edge, cfg.radio,
                          cfg.weights)
                  .cost;
          branch(out, size_prob * (1.0 - outage), st.gain_index, st.queue_len - 1,
                 st.resource_bin, false, c);
        }
        if (outage > 0.0) {
          branch(out, size_prob * outage, st.gain_index, st.queue_len - 1,
                 st.resource_bin, true, penalty);
        }
      }
    }
  }
  return mdp;
}

QTable ValueIterationOracle(const EnvConfig& cfg, double gamma, int horizon) {
  FiniteMdp mdp = BuildOffloadMdp(cfg);
  QTable q = SolveFiniteHorizon(mdp, gamma, horizon);
  QTable out(cfg);
  std::copy(q.values().begin(), q.values().end(), out.values().begin());
  return out;
}

}  // namespace offload
