#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "offload/errors.hpp"
#include "offload/harness.hpp"

namespace offload {

namespace {

using nlohmann::ordered_json;

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

void Finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed: " + path.string());
}

// JSON numbers carry the same 9 significant digits as the CSV text.
double Rounded(double v) { return std::stod(FormatFloat(v)); }

void WriteJson(const ordered_json& doc, const std::filesystem::path& path) {
  auto os = OpenForWrite(path);
  os << doc.dump(2) << '\n';
  Finish(os, path);
}

}  // namespace

std::string FormatFloat(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void EmitConvergence(const ConvergenceSeries& series, Format format,
                     const std::filesystem::path& path) {
  if (format == Format::kJson) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < series.episodes.size(); ++i) {
      const EpisodeMetrics& m = series.episodes[i];
      rows.push_back({{"episode", i + 1},
                      {"avg_cost", Rounded(m.average_cost())},
                      {"cum_power", Rounded(m.total_power)},
                      {"cum_latency", Rounded(m.total_latency)},
                      {"term_reason", ToString(m.reason)}});
    }
    WriteJson(rows, path);
    return;
  }
  auto os = OpenForWrite(path);
  os << "episode,avg_cost,cum_power,cum_latency,term_reason\n";
  for (std::size_t i = 0; i < series.episodes.size(); ++i) {
    const EpisodeMetrics& m = series.episodes[i];
    os << i + 1 << ',' << FormatFloat(m.average_cost()) << ','
       << FormatFloat(m.total_power) << ',' << FormatFloat(m.total_latency) << ','
       << ToString(m.reason) << '\n';
  }
  Finish(os, path);
}

void EmitComparison(std::span<const RunSummary> summaries, Format format,
                    const std::filesystem::path& path) {
  if (format == Format::kJson) {
    ordered_json rows = ordered_json::array();
    for (const RunSummary& s : summaries) {
      for (std::size_t k = 0; k < s.mean_cum_power.size(); ++k) {
        rows.push_back({{"mode", s.mode},
                        {"epoch", k + 1},
                        {"mean_cum_power", Rounded(s.mean_cum_power[k])},
                        {"mean_cum_latency", Rounded(s.mean_cum_latency[k])},
                        {"mean_cum_cost", Rounded(s.mean_cum_cost[k])}});
      }
    }
    WriteJson(rows, path);
    return;
  }
  auto os = OpenForWrite(path);
  os << "mode,epoch,mean_cum_power,mean_cum_latency,mean_cum_cost\n";
  for (const RunSummary& s : summaries) {
    for (std::size_t k = 0; k < s.mean_cum_power.size(); ++k) {
      os << s.mode << ',' << k + 1 << ',' << FormatFloat(s.mean_cum_power[k]) << ','
         << FormatFloat(s.mean_cum_latency[k]) << ',' << FormatFloat(s.mean_cum_cost[k])
         << '\n';
    }
  }
  Finish(os, path);
}

void EmitSweep(std::span<const RunSummary> summaries, Format format,
               const std::filesystem::path& path) {
  if (format == Format::kJson) {
    ordered_json rows = ordered_json::array();
    for (const RunSummary& s : summaries) {
      for (std::size_t k = 0; k < s.mean_cum_cost.size(); ++k) {
        rows.push_back({{"beta", Rounded(s.beta)},
                        {"epoch", k + 1},
                        {"mean_cum_cost", Rounded(s.mean_cum_cost[k])}});
      }
    }
    WriteJson(rows, path);
    return;
  }
  auto os = OpenForWrite(path);
  os << "beta,epoch,mean_cum_cost\n";
  for (const RunSummary& s : summaries) {
    for (std::size_t k = 0; k < s.mean_cum_cost.size(); ++k) {
      os << FormatFloat(s.beta) << ',' << k + 1 << ',' << FormatFloat(s.mean_cum_cost[k])
         << '\n';
    }
  }
  Finish(os, path);
}

}  // namespace offload
