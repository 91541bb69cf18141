#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lifemax/io/config.hpp"

namespace lifemax::io {

struct ScheduleEntry {
  int tx = 0;
  int rx = 0;
  double time_s = 0;
};

struct TreeEntry {
  int index = 0;
  int root = 0;
  std::vector<std::pair<int, int>> edges;
  double weight_s = 0;
};

struct EnergyEntry {
  int node = 0;
  double energy_j = 0;
};

/// One solved instance, fully self-describing. Fixed units: seconds,
/// bits, bits per second, watts, joules. `exact` carries rational-mode
/// values as exact fraction strings keyed by quantity name.
struct Report {
  std::string schema = "lifemax-report-v1";
  std::string service;       // "m2m" or "broadcast"
  std::string solver;        // "closed_form", "lp" or "both"
  std::string network_kind;  // "line" or "explicit"
  std::vector<int> node_ids;
  double rate_bit_per_s = 0;
  std::vector<ScheduleEntry> schedule;  // m2m services
  std::vector<TreeEntry> trees;         // broadcast services
  std::vector<EnergyEntry> energies;
  double max_energy_j = 0;
  int argmax_node = 0;
  std::optional<double> battery_e0_j;
  std::optional<long long> cycles;
  std::optional<double> gap_rel;  // set when solver = "both"
  std::vector<std::pair<std::string, std::string>> exact;
};

std::string report_to_json(const Report& rep);
Report report_from_json(const std::string& text);

/// Plot-ready flat form: record,id_a,id_b,value,unit. Tree edge lists
/// stay JSON-only; the CSV keeps weights and energies.
std::string report_to_csv(const Report& rep);

/// Writes per cfg (file or stdout) in the requested format.
void write_report(const Report& rep, const OutputConfig& out);

Report read_report(const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

}  // namespace lifemax::io
