#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "offload/agent.hpp"
#include "offload/errors.hpp"

using namespace offload;

namespace {

const std::vector<ActionChoice> kThree = {ActionChoice::Local(), ActionChoice::Offload(0),
                                          ActionChoice::Offload(1)};

// One gain, no outage, one task per frame: each frame is a single decision.
EnvConfig SingleDecision(double device_power_per_cycle) {
  EnvConfig cfg = DefaultEnvConfig();
  cfg.channel = ChannelChain::Persistent({1e-5}, 1.0);
  cfg.radio.outage_prob = {0.0};
  cfg.radio.power_levels_w = {0.1};
  cfg.arrival_prob = 0.0;
  cfg.max_queue = 1;
  cfg.device.power_per_cycle = device_power_per_cycle;
  return cfg;
}

}  // namespace

TEST_CASE("select action picks the lowest entry") {
  QTable q(1, 3);
  q.at(0, 0) = 0.3;
  q.at(0, 1) = 0.1;
  q.at(0, 2) = 0.2;
  Rng rng(1);
  CHECK(SelectAction(q, 0, kThree, 0.0, rng) == ActionChoice::Offload(0));

  // Restricted legal set.
  const std::vector<ActionChoice> two = {ActionChoice::Local(), ActionChoice::Offload(1)};
  CHECK(SelectAction(q, 0, two, 0.0, rng) == ActionChoice::Offload(1));

  // Ties go to the lowest action index.
  QTable flat(1, 3);
  CHECK(SelectAction(flat, 0, kThree, 0.0, rng) == ActionChoice::Local());

  CHECK_THROWS_AS(SelectAction(q, 0, {}, 0.0, rng), NoLegalAction);
}

TEST_CASE("select action exploration frequencies") {
  QTable q(1, 3);
  q.at(0, 0) = 0.3;
  q.at(0, 1) = 0.1;
  q.at(0, 2) = 0.2;
  Rng rng(2024);
  const int n = 100000;

  std::vector<int> counts(3, 0);
  for (int i = 0; i < n; ++i) ++counts[SelectAction(q, 0, kThree, 1.0, rng).Index()];
  for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 3.0) < 0.01);

  int best = 0;
  for (int i = 0; i < n; ++i) best += SelectAction(q, 0, kThree, 0.1, rng).Index() == 1;
  CHECK(std::abs(best / double(n) - (0.9 + 0.1 / 3.0)) < 0.01);
}

TEST_CASE("update q") {
  QTable q(2, 3);
  const double v = UpdateQ(q, 0, ActionChoice::Local(), 0.055, 1, kThree, false, 0.5, 0.5);
  CHECK(v == doctest::Approx(0.0275));
  CHECK(q.at(0, 0) == v);

  // alpha 1 overwrites with the target.
  q.at(1, 0) = 0.4;
  q.at(1, 1) = 0.2;
  q.at(1, 2) = 0.3;
  UpdateQ(q, 0, ActionChoice::Offload(1), 0.1, 1, kThree, false, 1.0, 0.5);
  CHECK(q.at(0, 2) == doctest::Approx(0.1 + 0.5 * 0.2));

  // Bootstrap only over the legal successors.
  const std::vector<ActionChoice> only_local = {ActionChoice::Local()};
  UpdateQ(q, 0, ActionChoice::Offload(1), 0.1, 1, only_local, false, 1.0, 0.5);
  CHECK(q.at(0, 2) == doctest::Approx(0.1 + 0.5 * 0.4));

  // Terminal transitions and empty successor sets bootstrap from zero.
  UpdateQ(q, 0, ActionChoice::Offload(1), 0.1, 1, kThree, true, 1.0, 0.5);
  CHECK(q.at(0, 2) == doctest::Approx(0.1));
  UpdateQ(q, 0, ActionChoice::Offload(0), 0.2, 1, {}, false, 1.0, 0.5);
  CHECK(q.at(0, 1) == doctest::Approx(0.2));

  // Zero cost into a zero successor halves the entry each time.
  QTable d(2, 1);
  d.at(0, 0) = 1.0;
  const std::vector<ActionChoice> l = {ActionChoice::Local()};
  for (int i = 1; i <= 5; ++i) {
    UpdateQ(d, 0, ActionChoice::Local(), 0.0, 1, l, false, 0.5, 0.5);
    CHECK(d.at(0, 0) == doctest::Approx(std::pow(0.5, i)));
  }
}

TEST_CASE("derive seed") {
  CHECK(DeriveSeed(1, 2, 3) == DeriveSeed(1, 2, 3));
  CHECK(DeriveSeed(1, 2, 3) != DeriveSeed(1, 2, 4));
  CHECK(DeriveSeed(1, 2, 3) != DeriveSeed(1, 3, 3));
  CHECK(DeriveSeed(1, 2, 3) != DeriveSeed(2, 2, 3));
}

TEST_CASE("training with zero episodes leaves the table at zero") {
  LearningParams p;
  p.episodes = 0;
  const auto r = Train(DefaultEnvConfig(), p, 1);
  CHECK(r.episodes.empty());
  CHECK(std::all_of(r.q.values().begin(), r.q.values().end(),
                    [](double v) { return v == 0.0; }));
}

TEST_CASE("training is reproducible from its seed") {
  LearningParams p;
  p.episodes = 50;
  const auto a = Train(DefaultEnvConfig(), p, 9);
  const auto b = Train(DefaultEnvConfig(), p, 9);
  const auto c = Train(DefaultEnvConfig(), p, 10);
  CHECK(a.q == b.q);
  CHECK_FALSE(a.q == c.q);
  CHECK(a.episodes.size() == 50);
}

TEST_CASE("learned policy picks the cheaper single decision") {
  LearningParams p;
  p.episodes = 300;
  for (double ppc : {1e-8, 1e-7}) {
    const EnvConfig cfg = SingleDecision(ppc);
    const auto r = Train(cfg, p, 3);
    const Policy greedy = GreedyPolicy(r.q);
    const Policy local = BaselinePolicy(BaselineKind::kLocalOnly);
    const Policy edge = BaselinePolicy(BaselineKind::kEdgeOnly, 0);
    Environment env(cfg);
    Rng rng(0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const double g = RunEpisode(env, greedy, seed, rng).total_cost;
      const double lo = RunEpisode(env, local, seed, rng).total_cost;
      const double ed = RunEpisode(env, edge, seed, rng).total_cost;
      CHECK(g == std::min(lo, ed));
      if (ppc == 1e-8) {
        CHECK(lo < ed);
      } else {
        CHECK(ed < lo);
      }
    }
  }
}

TEST_CASE("greedy policy") {
  const EnvConfig cfg = DefaultEnvConfig();
  const NetworkState s{1, 4, 10};
  const auto legal = LegalActions(s, cfg);
  Rng rng(0);

  QTable zeros(cfg);
  CHECK(GreedyPolicy(zeros).Choose(cfg, s, legal, rng) == ActionChoice::Local());

  QTable q(cfg);
  const int idx = cfg.StateIndex(s);
  q.at(idx, 0) = 0.5;
  q.at(idx, 1) = 0.2;
  q.at(idx, 2) = 0.4;
  CHECK(GreedyPolicy(q).Choose(cfg, s, legal, rng) == ActionChoice::Offload(0));

  // Adding a constant to every entry leaves the choice alone.
  QTable shifted = q;
  for (double& v : shifted.values()) v += 3.0;
  CHECK(GreedyPolicy(shifted).Choose(cfg, s, legal, rng) == ActionChoice::Offload(0));

  CHECK_FALSE(GreedyPolicy(q).Choose(cfg, {1, 0, 10}, {}, rng).has_value());
}

TEST_CASE("baseline policies") {
  const EnvConfig cfg = DefaultEnvConfig();
  Rng rng(0);
  const Policy local = BaselinePolicy(BaselineKind::kLocalOnly);
  const Policy edge = BaselinePolicy(BaselineKind::kEdgeOnly, 1);

  const NetworkState full{0, 5, 10};
  CHECK(local.Choose(cfg, full, LegalActions(full, cfg), rng) == ActionChoice::Local());
  CHECK(edge.Choose(cfg, full, LegalActions(full, cfg), rng) == ActionChoice::Offload(1));

  // Local is not legal at the bottom bin.
  const NetworkState drained{0, 5, 0};
  CHECK_FALSE(local.Choose(cfg, drained, LegalActions(drained, cfg), rng).has_value());
  CHECK_THROWS_AS(BaselinePolicy(BaselineKind::kEdgeOnly, -1), ConfigError);
}

TEST_CASE("learning parameter validation") {
  LearningParams p;
  CHECK_NOTHROW(p.Validate());
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.Validate(), ConfigError);
  p = {};
  p.gamma = 1.5;
  CHECK_THROWS_AS(p.Validate(), ConfigError);
  p = {};
  p.epsilon = -0.1;
  CHECK_THROWS_AS(p.Validate(), ConfigError);
  p = {};
  p.episodes = -1;
  CHECK_THROWS_AS(p.Validate(), ConfigError);
}
