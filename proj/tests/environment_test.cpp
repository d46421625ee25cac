#include <cmath>
#include <vector>

#include "doctest.h"
#include "offload/environment.hpp"
#include "offload/errors.hpp"

using namespace offload;

TEST_CASE("reset starts full") {
  const EnvConfig cfg = DefaultEnvConfig();
  Environment env(cfg);
  for (std::uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
    const NetworkState s = env.Reset(seed);
    CHECK(s.queue_len == cfg.max_queue);
    CHECK(s.resource_bin == cfg.resource_bins);
    CHECK(env.remaining_cycles() == cfg.device.total_cycle_budget);
    CHECK(env.epoch() == 1);
  }
}

TEST_CASE("reset draws the initial gain uniformly") {
  Environment env(DefaultEnvConfig());
  std::vector<int> counts(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[env.Reset(i).gain_index];
  for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 3.0) < 0.01);
}

TEST_CASE("same seed, same actions, same trajectory") {
  Environment a(DefaultEnvConfig());
  Environment b(DefaultEnvConfig());
  CHECK(a.Reset(7) == b.Reset(7));
  const std::vector<ActionChoice> plan = {ActionChoice::Offload(1), ActionChoice::Local(),
                                          ActionChoice::Offload(0), ActionChoice::Local()};
  for (const auto& act : plan) {
    if (a.done()) break;
    const auto oa = a.Step(act);
    const auto ob = b.Step(act);
    CHECK(oa.kind == ob.kind);
    CHECK(oa.cost == ob.cost);
    CHECK(oa.next_state == ob.next_state);
    CHECK(oa.task->size_bits == ob.task->size_bits);
  }
}

TEST_CASE("queue bookkeeping") {
  SUBCASE("one out, one in") {
    EnvConfig cfg = DefaultEnvConfig();
    cfg.max_queue = 5;
    cfg.arrival_prob = 1.0;
    Environment env(cfg);
    env.Reset(3);
    const auto out = env.Step(ActionChoice::Local());
    CHECK(out.kind == OutcomeKind::kLocalSuccess);
    CHECK(out.next_state.queue_len == 5);
    CHECK_FALSE(out.terminal);
  }
  SUBCASE("last task handled, nothing arrives") {
    EnvConfig cfg = DefaultEnvConfig();
    cfg.max_queue = 1;
    cfg.arrival_prob = 0.0;
    Environment env(cfg);
    env.Reset(3);
    const auto out = env.Step(ActionChoice::Offload(0));
    CHECK(out.next_state.queue_len == 0);
    CHECK(out.terminal);
    CHECK(out.reason == TerminationReason::kQueueEmpty);
    CHECK_THROWS_AS(env.Step(ActionChoice::Local()), IllegalAction);
  }
}

TEST_CASE("four largest local executions exhaust the default budget") {
  EnvConfig cfg = DefaultEnvConfig();
  cfg.task_sizes_bits = {25000};
  cfg.arrival_prob = 1.0;
  Environment env(cfg);
  env.Reset(11);
  double before = env.remaining_cycles();
  for (int i = 0; i < 3; ++i) {
    const auto out = env.Step(ActionChoice::Local());
    CHECK(before - out.remaining_cycles == 500.0 * 25000);
    before = out.remaining_cycles;
    CHECK_FALSE(out.terminal);
  }
  CHECK(env.remaining_cycles() == 1.25e7);
  const auto last = env.Step(ActionChoice::Local());
  CHECK(last.remaining_cycles == 0.0);
  CHECK(last.terminal);
  CHECK(last.reason == TerminationReason::kResourceExhausted);
  // Nine tasks were still queued; they are dropped and charged.
  CHECK(last.dropped_tasks == 9);
  CHECK(last.cost == doctest::Approx(0.1375 + 9 * cfg.radio.penalty));
  CHECK(last.next_state.queue_len == 0);
}

TEST_CASE("exhaustion without the unserved-task charge") {
  EnvConfig cfg = DefaultEnvConfig();
  cfg.task_sizes_bits = {25000};
  cfg.charge_unserved_on_exhaustion = false;
  Environment env(cfg);
  env.Reset(11);
  StepOutcome out;
  for (int i = 0; i < 4; ++i) out = env.Step(ActionChoice::Local());
  CHECK(out.terminal);
  CHECK(out.dropped_tasks == 0);
  CHECK(out.cost == doctest::Approx(0.1375));
}

TEST_CASE("legal actions") {
  const EnvConfig cfg = DefaultEnvConfig();
  const double full = cfg.device.total_cycle_budget;
  CHECK(LegalActions({0, 0, 10}, full, cfg).empty());
  CHECK(LegalActions({0, 3, 10}, full, cfg) ==
        std::vector<ActionChoice>{ActionChoice::Local(), ActionChoice::Offload(0),
                                  ActionChoice::Offload(1)});
  CHECK(LegalActions({1, 3, 0}, cfg) ==
        std::vector<ActionChoice>{ActionChoice::Offload(0), ActionChoice::Offload(1)});
  // Local needs room for the largest task, 1.25e7 cycles.
  CHECK(LegalActions({1, 3, 2}, 1.25e7, cfg).size() == 3);
  CHECK(LegalActions({1, 3, 2}, 1.25e7 - 1, cfg).size() == 2);
}

TEST_CASE("illegal actions are rejected") {
  Environment env(DefaultEnvConfig());
  env.Reset(5);
  CHECK_THROWS_AS(env.Step(ActionChoice::Offload(2)), IllegalAction);
  CHECK_THROWS_AS(env.Step(ActionChoice::Offload(-1)), IllegalAction);
}

TEST_CASE("idle epoch") {
  EnvConfig cfg = DefaultEnvConfig();
  cfg.arrival_prob = 0.0;
  Environment env(cfg);
  env.Reset(5);
  const auto out = env.Step(std::nullopt);
  CHECK(out.kind == OutcomeKind::kIdle);
  CHECK(out.cost == 0.0);
  CHECK(out.power == 0.0);
  CHECK(out.next_state.queue_len == cfg.max_queue);
  CHECK(out.remaining_cycles == cfg.device.total_cycle_budget);
}

TEST_CASE("channel transitions") {
  Rng rng(17);
  ChannelChain identity = ChannelChain::Persistent({1e-5, 2e-5, 3e-5}, 1.0);
  for (int i = 0; i < 100; ++i) CHECK(SampleChannelTransition(i % 3, identity, rng) == i % 3);

  ChannelChain shift = identity;
  shift.transition[0] = {0.0, 1.0, 0.0};
  for (int i = 0; i < 100; ++i) CHECK(SampleChannelTransition(0, shift, rng) == 1);

  const ChannelChain chain = DefaultEnvConfig().channel;
  int stays = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) stays += SampleChannelTransition(1, chain, rng) == 1;
  CHECK(std::abs(stays / double(n) - 0.5) < 0.01);
}

TEST_CASE("outage extremes") {
  for (double p : {0.0, 1.0}) {
    EnvConfig cfg = DefaultEnvConfig();
    cfg.radio.outage_prob = {p, p, p};
    Environment env(cfg);
    for (int episode = 0; episode < 50; ++episode) {
      env.Reset(episode);
      while (!env.done()) {
        const auto out = env.Step(ActionChoice::Offload(episode % 2));
        if (p == 0.0) {
          CHECK(out.kind == OutcomeKind::kOffloadSuccess);
        } else {
          CHECK(out.kind == OutcomeKind::kOffloadFailure);
          CHECK(out.cost == cfg.radio.penalty);
          CHECK(out.power == 0.0);
          CHECK(out.latency == 0.0);
        }
      }
    }
  }
}

TEST_CASE("stop on transmission failure") {
  EnvConfig cfg = DefaultEnvConfig();
  cfg.radio.outage_prob = {1.0, 1.0, 1.0};
  cfg.stop_on_transmission_failure = true;
  Environment env(cfg);
  env.Reset(1);
  const auto out = env.Step(ActionChoice::Offload(0));
  CHECK(out.terminal);
  CHECK(out.reason == TerminationReason::kTransmissionFailureStop);
}

TEST_CASE("horizon ends the frame") {
  EnvConfig cfg = DefaultEnvConfig();
  cfg.arrival_prob = 1.0;
  cfg.radio.outage_prob = {0.0, 0.0, 0.0};
  Environment env(cfg);
  env.Reset(2);
  int steps = 0;
  StepOutcome out;
  while (!env.done()) {
    out = env.Step(ActionChoice::Offload(0));
    ++steps;
  }
  CHECK(steps == cfg.horizon);
  CHECK(out.reason == TerminationReason::kHorizon);
}

TEST_CASE("state indexing round trip") {
  const EnvConfig cfg = DefaultEnvConfig();
  CHECK(cfg.StateCount() == 3 * 10 * 11);
  for (int i = 0; i < cfg.StateCount(); ++i) CHECK(cfg.StateIndex(cfg.StateFromIndex(i)) == i);
  CHECK(cfg.ResourceBin(cfg.device.total_cycle_budget) == 10);
  CHECK(cfg.ResourceBin(0.0) == 0);
  CHECK(cfg.ResourceBin(4.99e7) == 9);
}

TEST_CASE("config validation") {
  EnvConfig cfg = DefaultEnvConfig();
  CHECK_NOTHROW(cfg.Validate());
  auto bad = cfg;
  bad.horizon = 0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = cfg;
  bad.arrival_prob = 1.5;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = cfg;
  bad.task_sizes_bits.clear();
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = cfg;
  bad.channel.transition[0] = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = cfg;
  bad.channel.gain_values = {2e-5, 1e-5, 3e-5};
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
}
