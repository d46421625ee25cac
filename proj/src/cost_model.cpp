#include "offload/cost_model.hpp"

#include <cmath>
#include <string>

#include "offload/errors.hpp"

namespace offload {

namespace {

void RequirePositive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(name) + " must be strictly positive");
  }
}

}  // namespace

void DeviceProfile::Validate(double max_task_bits) const {
  RequirePositive(cycles_per_bit, "device_cycles_per_bit");
  RequirePositive(power_per_cycle, "device_power_per_cycle");
  RequirePositive(compute_capacity, "device_capacity");
  RequirePositive(total_cycle_budget, "device_cycle_budget");
  if (total_cycle_budget < cycles_per_bit * max_task_bits) {
    throw ConfigError(
        "device_cycle_budget must cover at least one local execution of the "
        "largest task");
  }
}

void EdgeProfile::Validate() const {
  RequirePositive(cycles_per_bit, "edge_cycles_per_bit");
  RequirePositive(power_per_cycle, "edge_power_per_cycle");
  RequirePositive(allocated_capacity, "edge_capacity");
}

void RadioProfile::Validate(std::size_t gain_states) const {
  RequirePositive(bandwidth_hz, "bandwidth");
  RequirePositive(noise_power_w, "noise power");
  if (power_levels_w.empty()) throw ConfigError("power_levels must be nonempty");
  for (std::size_t i = 0; i < power_levels_w.size(); ++i) {
    RequirePositive(power_levels_w[i], "power_levels");
    if (i > 0 && !(power_levels_w[i] > power_levels_w[i - 1])) {
      throw ConfigError("power_levels must be strictly increasing");
    }
  }
  if (!(penalty >= 0.0) || !std::isfinite(penalty)) {
    throw ConfigError("penalty must be nonnegative");
  }
  if (outage_prob.size() != gain_states) {
    throw ConfigError("outage_probs needs one entry per channel gain state");
  }
  for (double p : outage_prob) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("outage_probs must lie in [0,1]");
  }
}

void CostWeights::Validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0,1]");
}

double DbmToWatts(double level_dbm) {
  return std::pow(10.0, (level_dbm - 30.0) / 10.0);
}

double NoisePowerWatts(double density_dbm_per_hz, double bandwidth_hz) {
  return DbmToWatts(density_dbm_per_hz + 10.0 * std::log10(bandwidth_hz));
}

CostBreakdown LocalCost(const TaskSpec& task, const DeviceProfile& dev,
                        const CostWeights& w) {
  const double bits = static_cast<double>(task.size_bits);
  CostBreakdown out;
  out.power = dev.cycles_per_bit * dev.power_per_cycle * bits;
  out.latency = dev.cycles_per_bit * bits / dev.compute_capacity;
  out.cost = out.power + w.beta * out.latency;
  return out;
}

double TransmissionRate(double power_w, double gain, const RadioProfile& radio) {
  if (power_w == 0.0) return 0.0;
  return radio.bandwidth_hz *
         std::log2(1.0 + power_w * gain / radio.noise_power_w);
}

CostBreakdown OffloadCost(const TaskSpec& task, double power_w, double gain,
                          const EdgeProfile& edge, const RadioProfile& radio,
                          const CostWeights& w) {
  const double rate = TransmissionRate(power_w, gain, radio);
  if (!(rate > 0.0)) throw ZeroRate("transmission rate is zero");
  const double bits = static_cast<double>(task.size_bits);
  CostBreakdown out;
  out.power = edge.cycles_per_bit * edge.power_per_cycle * bits + power_w;
  out.latency = edge.cycles_per_bit * bits / edge.allocated_capacity + bits / rate;
  out.cost = out.power + w.beta * out.latency;
  return out;
}

const char* ToString(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kLocalSuccess: return "local-success";
    case OutcomeKind::kOffloadSuccess: return "offload-success";
    case OutcomeKind::kOffloadFailure: return "offload-failure";
    case OutcomeKind::kIdle: return "idle";
  }
  return "unknown";
}

double StepCost(OutcomeKind kind, const CostBreakdown& executed,
                const RadioProfile& radio) {
  switch (kind) {
    case OutcomeKind::kLocalSuccess:
    case OutcomeKind::kOffloadSuccess: return executed.cost;
    case OutcomeKind::kOffloadFailure: return radio.penalty;
    case OutcomeKind::kIdle: return 0.0;
  }
  return 0.0;
}

}  // namespace offload
