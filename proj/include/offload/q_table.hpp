#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "offload/environment.hpp"

namespace offload {

// Dense state x action table of expected discounted cost.
class QTable {
 public:
  QTable() = default;
  QTable(int state_count, int action_count, std::uint64_t config_hash = 0);
  explicit QTable(const EnvConfig& cfg);

  int state_count() const { return state_count_; }
  int action_count() const { return action_count_; }
  std::uint64_t config_hash() const { return config_hash_; }

  double& at(int state, int action) { return values_[Offset(state, action)]; }
  double at(int state, int action) const { return values_[Offset(state, action)]; }

  std::span<const double> row(int state) const {
    return {values_.data() + Offset(state, 0), static_cast<std::size_t>(action_count_)};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool Matches(const EnvConfig& cfg) const;

  // Text artifact: a short header then one row per state, full precision.
  void Save(const std::filesystem::path& path) const;
  static QTable Load(const std::filesystem::path& path);

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t Offset(int state, int action) const {
    return static_cast<std::size_t>(state) * action_count_ + action;
  }

  int state_count_ = 0;
  int action_count_ = 0;
  std::uint64_t config_hash_ = 0;
  std::vector<double> values_;
};

// FNV-1a over a canonical rendering of every field that shapes the MDP.
std::uint64_t ConfigHash(const EnvConfig& cfg);

}  // namespace offload
