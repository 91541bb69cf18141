#include "lifemax/io/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lifemax/errors.hpp"

namespace lifemax::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config " + where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing required field");
  return *it;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(where + "." + it.key(), "unknown field");
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& where) {
  if (!j.is_boolean()) fail(where, "expected true or false");
  return j.get<bool>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> num_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(num(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> int_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

NetworkConfig parse_network(const json& j) {
  NetworkConfig nc;
  nc.kind = str(need(j, "kind", "network"), "network.kind");
  if (nc.kind == "line") {
    check_keys(j, {"kind", "n", "with_collector"}, "network");
    nc.n = integer(need(j, "n", "network"), "network.n");
    nc.with_collector = j.contains("with_collector")
                            ? boolean(j["with_collector"], "network.with_collector")
                            : true;
  } else if (nc.kind == "explicit") {
    check_keys(j, {"kind", "positions", "ids", "collectors"}, "network");
    const json& pos = need(j, "positions", "network");
    if (!pos.is_array() || pos.empty()) fail("network.positions", "expected a nonempty array");
    for (std::size_t i = 0; i < pos.size(); ++i)
      nc.positions.push_back(num_list(pos[i], "network.positions[" + std::to_string(i) + "]"));
    nc.n = static_cast<int>(nc.positions.size());
    if (j.contains("ids"))
      nc.ids = int_list(j["ids"], "network.ids");
    else
      for (int i = 0; i < nc.n; ++i) nc.ids.push_back(i);
    if (j.contains("collectors")) nc.collectors = int_list(j["collectors"], "network.collectors");
  } else {
    fail("network.kind", "must be \"line\" or \"explicit\"");
  }
  return nc;
}

void parse_gain(const json& j, RunConfig& cfg) {
  check_keys(j, {"a", "lambdas", "exponents"}, "gain");
  if (j.contains("a")) {
    if (j.contains("lambdas") || j.contains("exponents"))
      fail("gain", "give either a single exponent \"a\" or lambdas with exponents");
    cfg.gain_lambdas = {1.0};
    cfg.gain_exponents = {num(j["a"], "gain.a")};
    return;
  }
  cfg.gain_lambdas = num_list(need(j, "lambdas", "gain"), "gain.lambdas");
  cfg.gain_exponents = num_list(need(j, "exponents", "gain"), "gain.exponents");
}

LogBase parse_log_base(const json& j, const std::string& where) {
  if (j.is_number()) {
    if (num(j, where) == 2.0) return LogBase::two;
    fail(where, "numeric log base must be 2");
  }
  const std::string s = str(j, where);
  if (s == "2") return LogBase::two;
  if (s == "e" || s == "natural") return LogBase::natural;
  fail(where, "must be 2, \"e\" or \"natural\"");
}

ChannelParams parse_channel(const json& j) {
  check_keys(j, {"p0_w", "n0_w", "bandwidth_hz", "log_base", "beta"}, "channel");
  ChannelParams p;
  if (j.contains("p0_w")) p.p0 = num(j["p0_w"], "channel.p0_w");
  if (j.contains("n0_w")) p.n0 = num(j["n0_w"], "channel.n0_w");
  if (j.contains("bandwidth_hz")) p.bandwidth = num(j["bandwidth_hz"], "channel.bandwidth_hz");
  if (j.contains("log_base")) p.log_base = parse_log_base(j["log_base"], "channel.log_base");
  if (j.contains("beta")) p.beta = num(j["beta"], "channel.beta");
  return p;
}

ServiceConfig parse_service(const json& j) {
  ServiceConfig sc;
  const std::string type = str(need(j, "type", "service"), "service.type");
  if (type == "m2m") {
    check_keys(j, {"type", "q_bits"}, "service");
    sc.kind = ServiceKind::m2m;
    sc.q = num_list(need(j, "q_bits", "service"), "service.q_bits");
  } else if (type == "broadcast") {
    check_keys(j, {"type", "source", "q_bits"}, "service");
    sc.kind = ServiceKind::broadcast;
    sc.source = integer(need(j, "source", "service"), "service.source");
    sc.qk = num(need(j, "q_bits", "service"), "service.q_bits");
  } else {
    fail("service.type", "must be \"m2m\" or \"broadcast\"");
  }
  return sc;
}

SolverChoice parse_solver(const json& j) {
  const std::string s = str(j, "solver");
  if (s == "closed_form") return SolverChoice::closed_form;
  if (s == "lp") return SolverChoice::lp;
  if (s == "both") return SolverChoice::both;
  fail("solver", "must be \"closed_form\", \"lp\" or \"both\"");
}

OutputConfig parse_output(const json& j) {
  check_keys(j, {"path", "format"}, "output");
  OutputConfig oc;
  if (j.contains("path")) oc.path = str(j["path"], "output.path");
  if (j.contains("format")) {
    const std::string f = str(j["format"], "output.format");
    if (f == "json")
      oc.format = ReportFormat::json;
    else if (f == "csv")
      oc.format = ReportFormat::csv;
    else
      fail("output.format", "must be \"json\" or \"csv\"");
  }
  return oc;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  check_keys(j,
             {"network", "gain", "channel", "service", "solver", "battery_e0_j",
              "rate_bit_per_s", "output"},
             "(top level)");
  RunConfig cfg;
  cfg.network = parse_network(need(j, "network", "(top level)"));
  parse_gain(need(j, "gain", "(top level)"), cfg);
  if (j.contains("channel")) cfg.channel = parse_channel(j["channel"]);
  cfg.service = parse_service(need(j, "service", "(top level)"));
  if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
  if (j.contains("battery_e0_j")) cfg.battery_e0 = num(j["battery_e0_j"], "battery_e0_j");
  if (j.contains("rate_bit_per_s")) cfg.rate_override = num(j["rate_bit_per_s"], "rate_bit_per_s");
  if (j.contains("output")) cfg.output = parse_output(j["output"]);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

GainSpec RunConfig::make_gain() const {
  VectorX<double> l(static_cast<Eigen::Index>(gain_lambdas.size()));
  VectorX<double> a(static_cast<Eigen::Index>(gain_exponents.size()));
  for (std::size_t i = 0; i < gain_lambdas.size(); ++i) l(static_cast<Eigen::Index>(i)) = gain_lambdas[i];
  for (std::size_t i = 0; i < gain_exponents.size(); ++i) a(static_cast<Eigen::Index>(i)) = gain_exponents[i];
  return GainSpec(l, a);
}

double RunConfig::common_rate() const {
  return rate_override ? *rate_override : max_rate(channel);
}

Network build_network(const NetworkConfig& nc) {
  try {
    if (nc.kind == "line") return build_line_network(nc.n, nc.with_collector);
    if (nc.kind != "explicit") throw ConfigError("config network.kind: must be \"line\" or \"explicit\"");
    const std::size_t n = nc.positions.size();
    if (n == 0) throw ConfigError("config network.positions: empty");
    const std::size_t d = nc.positions.front().size();
    MatrixX<double> pos(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
      if (nc.positions[i].size() != d)
        throw ConfigError("config network.positions: rows must share one dimension");
      for (std::size_t c = 0; c < d; ++c)
        pos(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = nc.positions[i][c];
    }
    if (nc.ids.size() != n) throw ConfigError("config network.ids: needs one id per position");
    return Network(pos, nc.ids, std::set<int>(nc.collectors.begin(), nc.collectors.end()));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config network: ") + e.what());
  }
}

void validate_config(const RunConfig& cfg) {
  const NetworkConfig& nc = cfg.network;
  if (nc.kind == "line" && nc.n < 1) throw ConfigError("config network.n: need at least one sensor");
  try {
    cfg.make_gain();
  } catch (const Error& e) {
    throw ConfigError(std::string("config gain: ") + e.what());
  }
  try {
    cfg.channel.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config channel: ") + e.what());
  }
  const Network net = build_network(nc);

  if (cfg.service.kind == ServiceKind::broadcast) {
    if (!net.collectors().empty())
      throw ConfigError("config service: broadcast requires a network without collectors");
    if (net.size() < 2) throw ConfigError("config service: broadcast needs at least two nodes");
    if (!net.has(cfg.service.source))
      throw ConfigError("config service.source: not a node of the network");
    if (!(cfg.service.qk > 0)) throw ConfigError("config service.q_bits: must be positive");
  } else {
    // A line m2m network without its collector can never deliver, so it
    // is rejected here; explicit networks go to the LP, which reports
    // infeasibility itself when no collector absorbs the traffic.
    if (nc.kind == "line" && !nc.with_collector)
      throw ConfigError("config service: line m2m requires with_collector");
    const std::size_t ns = net.sensors().size();
    if (cfg.service.q.size() != ns)
      throw ConfigError("config service.q_bits: need " + std::to_string(ns) +
                        " entries, one per sensor in ascending id order");
    for (double q : cfg.service.q)
      if (!(q > 0)) throw ConfigError("config service.q_bits: entries must be positive");
  }

  if (cfg.solver != SolverChoice::lp && nc.kind != "line")
    throw ConfigError("config solver: closed_form and both require a line network");
  if (cfg.rate_override && !(*cfg.rate_override > 0))
    throw ConfigError("config rate_bit_per_s: must be positive");
  if (cfg.battery_e0 && !(*cfg.battery_e0 >= 0))
    throw ConfigError("config battery_e0_j: must be nonnegative");
}

std::string to_string(ServiceKind k) { return k == ServiceKind::m2m ? "m2m" : "broadcast"; }

std::string to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::closed_form: return "closed_form";
    case SolverChoice::lp: return "lp";
    default: return "both";
  }
}

}  // namespace lifemax::io
