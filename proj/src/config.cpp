#include "offload/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "offload/errors.hpp"

namespace offload {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value for '" + std::string(key) + "': '" +
                    std::string(value) + "'");
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view text) {
  text = Trim(text);
  T out{};
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || text.empty()) BadValue(key, text);
  return out;
}

template <typename T>
std::vector<T> ParseList(std::string_view key, std::string_view text) {
  std::vector<T> out;
  text = Trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(ParseNumber<T>(key, text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view text) {
  text = Trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  BadValue(key, text);
}

std::string Num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename T>
std::string Join(const std::vector<T>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += Num(vs[i]);
    } else {
      out += std::to_string(vs[i]);
    }
  }
  return out;
}

struct KeyHandler {
  ConfigKey info;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeyHandler>& Handlers() {
  using C = ExperimentConfig;
  using SV = std::string_view;
  static const std::vector<KeyHandler> handlers = {
      {{"horizon", "epochs", "time epochs K per time frame"},
       [](C& c, SV v) { c.env.horizon = ParseNumber<int>("horizon", v); },
       [](const C& c) { return std::to_string(c.env.horizon); }},
      {{"max_queue", "tasks", "task queue capacity T_max"},
       [](C& c, SV v) { c.env.max_queue = ParseNumber<int>("max_queue", v); },
       [](const C& c) { return std::to_string(c.env.max_queue); }},
      {{"arrival_prob", "probability", "chance that one task arrives in an epoch"},
       [](C& c, SV v) { c.env.arrival_prob = ParseNumber<double>("arrival_prob", v); },
       [](const C& c) { return Num(c.env.arrival_prob); }},
      {{"task_sizes_bits", "bits, list", "task sizes drawn uniformly per task"},
       [](C& c, SV v) {
         c.env.task_sizes_bits = ParseList<std::int64_t>("task_sizes_bits", v);
       },
       [](const C& c) { return Join(c.env.task_sizes_bits); }},
      {{"gain_values", "dimensionless, list", "channel gain levels, increasing"},
       [](C& c, SV v) {
         c.env.channel.gain_values = ParseList<double>("gain_values", v);
       },
       [](const C& c) { return Join(c.env.channel.gain_values); }},
      {{"channel_stay_prob", "probability",
        "chance the gain level persists; the rest is spread evenly"},
       [](C& c, SV v) { c.channel_stay_prob = ParseNumber<double>("channel_stay_prob", v); },
       [](const C& c) { return Num(c.channel_stay_prob); }},
      {{"channel_transition", "probabilities, list",
        "row-major G x G gain transition matrix; overrides channel_stay_prob"},
       [](C& c, SV v) {
         c.channel_transition = ParseList<double>("channel_transition", v);
       },
       [](const C& c) { return Join(c.channel_transition); }},
      {{"device_cycles_per_bit", "cycles/bit", "end-device CPU cycles per input bit f_d"},
       [](C& c, SV v) {
         c.env.device.cycles_per_bit = ParseNumber<double>("device_cycles_per_bit", v);
       },
       [](const C& c) { return Num(c.env.device.cycles_per_bit); }},
      {{"device_power_per_cycle", "watts/cycle", "end-device power per CPU cycle P_d"},
       [](C& c, SV v) {
         c.env.device.power_per_cycle = ParseNumber<double>("device_power_per_cycle", v);
       },
       [](const C& c) { return Num(c.env.device.power_per_cycle); }},
      {{"device_capacity", "cycles/second", "end-device computation capacity D_d"},
       [](C& c, SV v) {
         c.env.device.compute_capacity = ParseNumber<double>("device_capacity", v);
       },
       [](const C& c) { return Num(c.env.device.compute_capacity); }},
      {{"device_cycle_budget", "cycles", "end-device cycle budget per time frame"},
       [](C& c, SV v) {
         c.env.device.total_cycle_budget = ParseNumber<double>("device_cycle_budget", v);
       },
       [](const C& c) { return Num(c.env.device.total_cycle_budget); }},
      {{"edge_cycles_per_bit", "cycles/bit", "edge-server CPU cycles per input bit f_s"},
       [](C& c, SV v) {
         c.env.edge.cycles_per_bit = ParseNumber<double>("edge_cycles_per_bit", v);
       },
       [](const C& c) { return Num(c.env.edge.cycles_per_bit); }},
      {{"edge_power_per_cycle", "watts/cycle", "edge-server power per CPU cycle P_s"},
       [](C& c, SV v) {
         c.env.edge.power_per_cycle = ParseNumber<double>("edge_power_per_cycle", v);
       },
       [](const C& c) { return Num(c.env.edge.power_per_cycle); }},
      {{"edge_capacity", "cycles/second", "edge capacity allocated to the device D_s"},
       [](C& c, SV v) {
         c.env.edge.allocated_capacity = ParseNumber<double>("edge_capacity", v);
       },
       [](const C& c) { return Num(c.env.edge.allocated_capacity); }},
      {{"bandwidth", "hertz", "uplink bandwidth B_w"},
       [](C& c, SV v) { c.env.radio.bandwidth_hz = ParseNumber<double>("bandwidth", v); },
       [](const C& c) { return Num(c.env.radio.bandwidth_hz); }},
      {{"noise_density", "dBm/Hz", "noise density; noise power is density + 10 log10 B_w"},
       [](C& c, SV v) {
         c.noise_density_dbm_per_hz = ParseNumber<double>("noise_density", v);
       },
       [](const C& c) { return Num(c.noise_density_dbm_per_hz); }},
      {{"power_levels", "watts, list", "transmit power levels, increasing"},
       [](C& c, SV v) { c.env.radio.power_levels_w = ParseList<double>("power_levels", v); },
       [](const C& c) { return Join(c.env.radio.power_levels_w); }},
      {{"penalty", "cost units", "cost charged per failed or dropped task"},
       [](C& c, SV v) { c.env.radio.penalty = ParseNumber<double>("penalty", v); },
       [](const C& c) { return Num(c.env.radio.penalty); }},
      {{"outage_probs", "probabilities, list", "transmission failure chance per gain level"},
       [](C& c, SV v) { c.env.radio.outage_prob = ParseList<double>("outage_probs", v); },
       [](const C& c) { return Join(c.env.radio.outage_prob); }},
      {{"beta", "dimensionless", "latency weight in cost = power + beta * latency"},
       [](C& c, SV v) { c.env.weights.beta = ParseNumber<double>("beta", v); },
       [](const C& c) { return Num(c.env.weights.beta); }},
      {{"resource_bins", "bins", "remaining-budget resolution of the state"},
       [](C& c, SV v) { c.env.resource_bins = ParseNumber<int>("resource_bins", v); },
       [](const C& c) { return std::to_string(c.env.resource_bins); }},
      {{"charge_unserved_on_exhaustion", "bool",
        "drop and penalize queued tasks when the cycle budget runs out"},
       [](C& c, SV v) {
         c.env.charge_unserved_on_exhaustion =
             ParseBool("charge_unserved_on_exhaustion", v);
       },
       [](const C& c) {
         return std::string(c.env.charge_unserved_on_exhaustion ? "true" : "false");
       }},
      {{"stop_on_transmission_failure", "bool",
        "end the time frame on the first failed transmission"},
       [](C& c, SV v) {
         c.env.stop_on_transmission_failure =
             ParseBool("stop_on_transmission_failure", v);
       },
       [](const C& c) {
         return std::string(c.env.stop_on_transmission_failure ? "true" : "false");
       }},
      {{"gamma", "dimensionless", "discount factor"},
       [](C& c, SV v) { c.learn.gamma = ParseNumber<double>("gamma", v); },
       [](const C& c) { return Num(c.learn.gamma); }},
      {{"alpha", "dimensionless", "learning rate"},
       [](C& c, SV v) { c.learn.alpha = ParseNumber<double>("alpha", v); },
       [](const C& c) { return Num(c.learn.alpha); }},
      {{"alpha_schedule", "constant|inverse-visits", "learning-rate schedule"},
       [](C& c, SV v) {
         v = Trim(v);
         if (v == "constant") {
           c.learn.alpha_schedule = AlphaSchedule::kConstant;
         } else if (v == "inverse-visits") {
           c.learn.alpha_schedule = AlphaSchedule::kInverseVisits;
         } else {
           BadValue("alpha_schedule", v);
         }
       },
       [](const C& c) {
         return std::string(c.learn.alpha_schedule == AlphaSchedule::kConstant
                                ? "constant"
                                : "inverse-visits");
       }},
      {{"epsilon", "probability", "exploration rate during training"},
       [](C& c, SV v) { c.learn.epsilon = ParseNumber<double>("epsilon", v); },
       [](const C& c) { return Num(c.learn.epsilon); }},
      {{"episodes", "time frames", "training episodes per seed"},
       [](C& c, SV v) { c.learn.episodes = ParseNumber<int>("episodes", v); },
       [](const C& c) { return std::to_string(c.learn.episodes); }},
      {{"eval_episodes", "time frames", "evaluation episodes per seed"},
       [](C& c, SV v) { c.eval_episodes = ParseNumber<int>("eval_episodes", v); },
       [](const C& c) { return std::to_string(c.eval_episodes); }},
      {{"seeds", "u64, list", "independent run seeds"},
       [](C& c, SV v) { c.seeds = ParseList<std::uint64_t>("seeds", v); },
       [](const C& c) { return Join(c.seeds); }},
      {{"beta_sweep", "dimensionless, list", "beta values for the sweep command"},
       [](C& c, SV v) { c.beta_sweep = ParseList<double>("beta_sweep", v); },
       [](const C& c) { return Join(c.beta_sweep); }},
      {{"edge_power_index", "index", "power level of the edge-only baseline, -1 = highest"},
       [](C& c, SV v) { c.edge_power_index = ParseNumber<int>("edge_power_index", v); },
       [](const C& c) { return std::to_string(c.edge_power_index); }},
      {{"output_dir", "path", "directory for artifacts"},
       [](C& c, SV v) { c.output_dir = std::string(Trim(v)); },
       [](const C& c) { return c.output_dir.string(); }},
  };
  return handlers;
}

}  // namespace

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& h : Handlers()) out.push_back(h.info);
    return out;
  }();
  return keys;
}

void ApplySetting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = Trim(key);
  for (const auto& h : Handlers()) {
    if (h.info.name == key) {
      h.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void ApplyOverride(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override must be KEY=VALUE: '" + std::string(assignment) + "'");
  }
  ApplySetting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    ApplySetting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  cfg.Finalize();
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ParseConfig(ss.str());
}

std::string RenderConfig(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& h : Handlers()) {
    out += "# " + h.info.description + " [" + h.info.unit + "]\n";
    out += h.info.name + " = " + h.get(cfg) + "\n";
  }
  return out;
}

}  // namespace offload
