#include <cmath>
#include <cstring>
#include <algorithm>

#include "doctest.h"
#include "offload/cost_model.hpp"
#include "offload/environment.hpp"
#include "offload/errors.hpp"

using namespace offload;

namespace {

RadioProfile TableRadio() { return DefaultEnvConfig().radio; }

}  // namespace

TEST_CASE("dbm to watts") {
  CHECK(DbmToWatts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(DbmToWatts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(DbmToWatts(-124.0) == doctest::Approx(3.98107e-16).epsilon(1e-5));
  CHECK(NoisePowerWatts(-174.0, 1e5) == doctest::Approx(std::pow(10.0, -15.4)).epsilon(1e-12));
}

TEST_CASE("local cost with table values") {
  const DeviceProfile dev;
  const auto c = LocalCost({10000}, dev, {0.5});
  CHECK(c.power == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(c.latency == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(c.cost == doctest::Approx(0.055).epsilon(1e-12));

  CHECK(LocalCost({10000}, dev, {0.0}).cost == c.power);

  const auto big = LocalCost({25000}, dev, {0.5});
  CHECK(big.power == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(big.latency == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(big.cost == doctest::Approx(0.1375).epsilon(1e-12));
}

TEST_CASE("transmission rate") {
  const RadioProfile radio = TableRadio();
  CHECK(TransmissionRate(0.1, 1e-5, radio) == doctest::Approx(3.1226e6).epsilon(1e-4));
  CHECK(TransmissionRate(0.0, 1e-5, radio) == 0.0);
  CHECK(TransmissionRate(0.1, 2e-5, radio) > TransmissionRate(0.1, 1e-5, radio));
  CHECK(TransmissionRate(0.2, 1e-5, radio) > TransmissionRate(0.1, 1e-5, radio));
}

TEST_CASE("offload cost with table values") {
  const RadioProfile radio = TableRadio();
  const EdgeProfile edge;
  const auto c = OffloadCost({10000}, 0.1, 1e-5, edge, radio, {0.5});
  CHECK(c.power == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(c.latency == doctest::Approx(4.4525e-3).epsilon(1e-4));
  CHECK(c.cost == doctest::Approx(0.152226).epsilon(1e-4));

  const auto no_latency = OffloadCost({10000}, 0.1, 1e-5, edge, radio, {0.0});
  CHECK(no_latency.cost == 500.0 * 1e-8 * 10000 + 0.1);

  CHECK_THROWS_AS(OffloadCost({10000}, 0.0, 1e-5, edge, radio, {0.5}), ZeroRate);
}

TEST_CASE("step cost branches") {
  const RadioProfile radio = TableRadio();
  const auto local = LocalCost({10000}, DeviceProfile{}, {0.5});
  CHECK(StepCost(OutcomeKind::kIdle, local, radio) == 0.0);
  CHECK(StepCost(OutcomeKind::kOffloadFailure, local, radio) == 1.0);
  CHECK(StepCost(OutcomeKind::kLocalSuccess, local, radio) == doctest::Approx(0.055));
}

TEST_CASE("default penalty exceeds every successful offload") {
  // Brute force over task sizes, power levels, gains at the largest weight.
  const EnvConfig cfg = DefaultEnvConfig();
  double worst = 0.0;
  for (auto m : cfg.task_sizes_bits) {
    for (double p : cfg.radio.power_levels_w) {
      for (double g : cfg.channel.gain_values) {
        worst = std::max(worst, OffloadCost({m}, p, g, cfg.edge, cfg.radio, {1.0}).cost);
      }
    }
    worst = std::max(worst, LocalCost({m}, cfg.device, {1.0}).cost);
  }
  CHECK(worst < cfg.radio.penalty);
}

TEST_CASE("cost properties") {
  const EnvConfig cfg = DefaultEnvConfig();
  for (auto m : cfg.task_sizes_bits) {
    // Edge compute is always faster than the device for equal cycles per bit.
    CHECK(LocalCost({m}, cfg.device, {0.5}).latency >
          cfg.edge.cycles_per_bit * m / cfg.edge.allocated_capacity);

    // Affine in beta with slope equal to the latency.
    for (double b1 : {0.0, 0.3}) {
      for (double b2 : {0.6, 1.0}) {
        const auto l1 = LocalCost({m}, cfg.device, {b1});
        const auto l2 = LocalCost({m}, cfg.device, {b2});
        CHECK(l2.cost - l1.cost == doctest::Approx((b2 - b1) * l1.latency));
        const auto o1 = OffloadCost({m}, 0.1, 1e-5, cfg.edge, cfg.radio, {b1});
        const auto o2 = OffloadCost({m}, 0.1, 1e-5, cfg.edge, cfg.radio, {b2});
        CHECK(o2.cost - o1.cost == doctest::Approx((b2 - b1) * o1.latency));
      }
    }
  }
  // Bit-identical on repeated evaluation.
  const auto a = OffloadCost({17000}, 0.025, 0.5e-5, cfg.edge, cfg.radio, {0.5});
  const auto b = OffloadCost({17000}, 0.025, 0.5e-5, cfg.edge, cfg.radio, {0.5});
  CHECK(std::memcmp(&a, &b, sizeof(a)) == 0);
}

TEST_CASE("profile validation") {
  DeviceProfile dev;
  CHECK_NOTHROW(dev.Validate(25000));
  dev.total_cycle_budget = 1e6;
  CHECK_THROWS_AS(dev.Validate(25000), ConfigError);

  RadioProfile radio = TableRadio();
  CHECK_NOTHROW(radio.Validate(3));
  CHECK_THROWS_AS(radio.Validate(2), ConfigError);
  radio.power_levels_w = {0.1, 0.05};
  CHECK_THROWS_AS(radio.Validate(3), ConfigError);

  CHECK_THROWS_AS(CostWeights{1.5}.Validate(), ConfigError);
  const EdgeProfile no_power{500, 0.0, 4e9};
  CHECK_THROWS_AS(no_power.Validate(), ConfigError);
}
