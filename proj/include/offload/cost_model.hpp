#pragma once

#include <cstdint>
#include <vector>

namespace offload {

// Local compute capability of the end device.
struct DeviceProfile {
  double cycles_per_bit = 500.0;      // cycles/bit
  double power_per_cycle = 1e-8;      // W per cycle
  double compute_capacity = 5e8;      // cycles/s
  double total_cycle_budget = 5e7;    // cycles available per time frame

  void Validate(double max_task_bits) const;
};

// Share of the gateway's edge server allocated to one end device.
struct EdgeProfile {
  double cycles_per_bit = 500.0;
  double power_per_cycle = 1e-8;
  double allocated_capacity = 4e9;

  void Validate() const;
};

struct RadioProfile {
  double bandwidth_hz = 1e5;
  double noise_power_w = 0.0;               // W
  std::vector<double> power_levels_w;       // strictly increasing
  double penalty = 1.0;                     // cost charged per failed task
  std::vector<double> outage_prob;          // one per channel-gain state

  void Validate(std::size_t gain_states) const;
};

struct CostWeights {
  double beta = 0.5;

  void Validate() const;
};

struct TaskSpec {
  std::int64_t size_bits = 0;
};

// Power, latency and the weighted sum for one executed task.
struct CostBreakdown {
  double power = 0.0;
  double latency = 0.0;
  double cost = 0.0;
};

// 10^((dbm - 30) / 10)
double DbmToWatts(double level_dbm);

// Thermal noise power over `bandwidth_hz` for a density given in dBm/Hz.
double NoisePowerWatts(double density_dbm_per_hz, double bandwidth_hz);

CostBreakdown LocalCost(const TaskSpec& task, const DeviceProfile& dev,
                        const CostWeights& w);

// Shannon rate B log2(1 + p g / sigma^2) in bit/s. Zero for zero power.
double TransmissionRate(double power_w, double gain, const RadioProfile& radio);

// Throws ZeroRate when the transmission rate is zero.
CostBreakdown OffloadCost(const TaskSpec& task, double power_w, double gain,
                          const EdgeProfile& edge, const RadioProfile& radio,
                          const CostWeights& w);

enum class OutcomeKind { kLocalSuccess, kOffloadSuccess, kOffloadFailure, kIdle };

const char* ToString(OutcomeKind kind);

// Per-epoch cost by outcome branch. `executed` is the breakdown of whichever
// mode ran; it is ignored for failure and idle epochs.
double StepCost(OutcomeKind kind, const CostBreakdown& executed,
                const RadioProfile& radio);

}  // namespace offload
