#include "offload/q_table.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "offload/errors.hpp"

namespace offload {

namespace {

void Append(std::string& out, const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s=%.17g;", key, v);
  out += buf;
}

void Append(std::string& out, const char* key, std::span<const double> vs) {
  out += key;
  out += '=';
  char buf[32];
  for (double v : vs) {
    std::snprintf(buf, sizeof(buf), "%.17g,", v);
    out += buf;
  }
  out += ';';
}

}  // namespace

QTable::QTable(int state_count, int action_count, std::uint64_t config_hash)
    : state_count_(state_count),
      action_count_(action_count),
      config_hash_(config_hash),
      values_(static_cast<std::size_t>(state_count) * action_count, 0.0) {
  if (state_count <= 0 || action_count <= 0) {
    throw DimensionMismatch("Q-table dimensions must be positive");
  }
}

QTable::QTable(const EnvConfig& cfg)
    : QTable(cfg.StateCount(), cfg.ActionCount(), ConfigHash(cfg)) {}

bool QTable::Matches(const EnvConfig& cfg) const {
  return state_count_ == cfg.StateCount() && action_count_ == cfg.ActionCount();
}

void QTable::Save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  char buf[64];
  os << "qtable 1\n";
  os << "states " << state_count_ << " actions " << action_count_ << '\n';
  std::snprintf(buf, sizeof(buf), "config_hash %016" PRIx64 "\n", config_hash_);
  os << buf;
  for (int s = 0; s < state_count_; ++s) {
    for (int a = 0; a < action_count_; ++a) {
      std::snprintf(buf, sizeof(buf), "%s%.17g", a == 0 ? "" : " ", at(s, a));
      os << buf;
    }
    os << '\n';
  }
  if (!os) throw IoError("write failed: " + path.string());
}

QTable QTable::Load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  std::string magic, states_kw, actions_kw, hash_kw, hash_hex;
  int version = 0, states = 0, actions = 0;
  is >> magic >> version >> states_kw >> states >> actions_kw >> actions >> hash_kw >>
      hash_hex;
  if (!is || magic != "qtable" || version != 1 || states_kw != "states" ||
      actions_kw != "actions" || hash_kw != "config_hash") {
    throw IoError("malformed Q-table header in " + path.string());
  }
  QTable q(states, actions, std::stoull(hash_hex, nullptr, 16));
  for (double& v : q.values_) {
    if (!(is >> v) || !std::isfinite(v)) {
      throw IoError("truncated or non-finite Q-table body in " + path.string());
    }
  }
  return q;
}

std::uint64_t ConfigHash(const EnvConfig& cfg) {
  std::string s;
  Append(s, "horizon", cfg.horizon);
  Append(s, "max_queue", cfg.max_queue);
  Append(s, "arrival_prob", cfg.arrival_prob);
  std::vector<double> sizes(cfg.task_sizes_bits.begin(), cfg.task_sizes_bits.end());
  Append(s, "task_sizes", sizes);
  Append(s, "gains", cfg.channel.gain_values);
  for (const auto& row : cfg.channel.transition) Append(s, "row", row);
  Append(s, "fd", cfg.device.cycles_per_bit);
  Append(s, "pd", cfg.device.power_per_cycle);
  Append(s, "dd", cfg.device.compute_capacity);
  Append(s, "budget", cfg.device.total_cycle_budget);
  Append(s, "fs", cfg.edge.cycles_per_bit);
  Append(s, "ps", cfg.edge.power_per_cycle);
  Append(s, "ds", cfg.edge.allocated_capacity);
  Append(s, "bw", cfg.radio.bandwidth_hz);
  Append(s, "noise", cfg.radio.noise_power_w);
  Append(s, "levels", cfg.radio.power_levels_w);
  Append(s, "penalty", cfg.radio.penalty);
  Append(s, "outage", cfg.radio.outage_prob);
  Append(s, "beta", cfg.weights.beta);
  Append(s, "bins", cfg.resource_bins);
  Append(s, "charge", cfg.charge_unserved_on_exhaustion ? 1.0 : 0.0);
  Append(s, "stop", cfg.stop_on_transmission_failure ? 1.0 : 0.0);

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace offload
