#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lifemax/channel.hpp"
#include "lifemax/network.hpp"

namespace lifemax::io {

enum class ServiceKind { m2m, broadcast };
enum class SolverChoice { closed_form, lp, both };
enum class ReportFormat { json, csv };

struct NetworkConfig {
  std::string kind;  // "line" or "explicit"
  int n = 0;
  bool with_collector = true;
  std::vector<std::vector<double>> positions;
  std::vector<int> ids;        // defaults to 0..n-1 when omitted
  std::vector<int> collectors;
};

struct ServiceConfig {
  ServiceKind kind = ServiceKind::m2m;
  std::vector<double> q;  // m2m: bits per sensor, ascending sensor id
  int source = 0;         // broadcast
  double qk = 0;          // broadcast: bits to deliver everywhere
};

struct OutputConfig {
  std::string path;  // empty writes to stdout
  ReportFormat format = ReportFormat::json;
};

struct RunConfig {
  NetworkConfig network;
  std::vector<double> gain_lambdas;
  std::vector<double> gain_exponents;
  ChannelParams channel;
  ServiceConfig service;
  SolverChoice solver = SolverChoice::both;
  std::optional<double> battery_e0;
  std::optional<double> rate_override;  // bits/s; defaults to the channel rate
  OutputConfig output;

  GainSpec make_gain() const;
  double common_rate() const;
};

/// Parses a config file (JSON with comments allowed). Malformed input
/// raises ConfigError carrying position or field diagnostics.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin);

/// Cross-field validation beyond what parsing can see. Line m2m configs
/// must keep their collector; explicit networks may omit collectors, in
/// which case the solver reports infeasibility instead.
void validate_config(const RunConfig& cfg);

Network build_network(const NetworkConfig& nc);

std::string to_string(ServiceKind k);
std::string to_string(SolverChoice s);

}  // namespace lifemax::io
