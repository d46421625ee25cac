#pragma once

#include <vector>

#include "offload/cost_model.hpp"
#include "offload/environment.hpp"

namespace offload {

struct EpochRecord {
  double cost = 0.0;
  double power = 0.0;
  double latency = 0.0;
  OutcomeKind kind = OutcomeKind::kIdle;
  int dropped_tasks = 0;
};

// Everything observed during one time frame.
struct EpisodeMetrics {
  std::vector<EpochRecord> epochs;
  double total_cost = 0.0;
  double total_power = 0.0;
  double total_latency = 0.0;
  int failures = 0;           // failed transmissions plus dropped tasks
  int offload_attempts = 0;
  int offload_failures = 0;
  TerminationReason reason = TerminationReason::kHorizon;

  int epochs_executed() const { return static_cast<int>(epochs.size()); }
  double average_cost() const {
    return epochs.empty() ? 0.0 : total_cost / static_cast<double>(epochs.size());
  }

  void Record(const StepOutcome& out);
};

}  // namespace offload
