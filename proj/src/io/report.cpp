#include "lifemax/io/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "lifemax/errors.hpp"

namespace lifemax::io {
namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

std::string format_number(double v) { return nlohmann::json(v).dump(); }

std::string report_to_json(const Report& rep) {
  ordered_json j;
  j["schema"] = rep.schema;
  j["service"] = rep.service;
  j["solver"] = rep.solver;
  j["units"] = {{"time", "s"}, {"data", "bit"}, {"rate", "bit/s"}, {"power", "W"},
                {"energy", "J"}};
  j["network"] = {{"kind", rep.network_kind}, {"node_ids", rep.node_ids}};
  j["rate_bit_per_s"] = rep.rate_bit_per_s;
  if (rep.service == "m2m") {
    ordered_json arr = ordered_json::array();
    for (const ScheduleEntry& s : rep.schedule)
      arr.push_back({{"tx", s.tx}, {"rx", s.rx}, {"time_s", s.time_s}});
    j["schedule"] = arr;
  }
  if (rep.service == "broadcast") {
    ordered_json arr = ordered_json::array();
    for (const TreeEntry& t : rep.trees) {
      ordered_json edges = ordered_json::array();
      for (const auto& [a, b] : t.edges) edges.push_back({a, b});
      arr.push_back({{"index", t.index}, {"root", t.root}, {"edges", edges},
                     {"weight_s", t.weight_s}});
    }
    j["trees"] = arr;
  }
  {
    ordered_json arr = ordered_json::array();
    for (const EnergyEntry& e : rep.energies)
      arr.push_back({{"node", e.node}, {"energy_j", e.energy_j}});
    j["energies"] = arr;
  }
  j["max_energy_j"] = rep.max_energy_j;
  j["argmax_node"] = rep.argmax_node;
  if (rep.battery_e0_j) j["battery_e0_j"] = *rep.battery_e0_j;
  if (rep.cycles) j["cycles"] = *rep.cycles;
  if (rep.gap_rel) j["gap_rel"] = *rep.gap_rel;
  if (!rep.exact.empty()) {
    ordered_json ex;
    for (const auto& [k, v] : rep.exact) ex[k] = v;
    j["exact"] = ex;
  }
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  Report rep;
  try {
    rep.schema = j.at("schema").get<std::string>();
    if (rep.schema != "lifemax-report-v1")
      throw ConfigError("report: unknown schema " + rep.schema);
    rep.service = j.at("service").get<std::string>();
    rep.solver = j.at("solver").get<std::string>();
    rep.network_kind = j.at("network").at("kind").get<std::string>();
    rep.node_ids = j.at("network").at("node_ids").get<std::vector<int>>();
    rep.rate_bit_per_s = j.at("rate_bit_per_s").get<double>();
    if (j.contains("schedule"))
      for (const auto& s : j["schedule"])
        rep.schedule.push_back({s.at("tx").get<int>(), s.at("rx").get<int>(),
                                s.at("time_s").get<double>()});
    if (j.contains("trees"))
      for (const auto& t : j["trees"]) {
        TreeEntry e;
        e.index = t.at("index").get<int>();
        e.root = t.at("root").get<int>();
        for (const auto& ed : t.at("edges"))
          e.edges.emplace_back(ed.at(0).get<int>(), ed.at(1).get<int>());
        e.weight_s = t.at("weight_s").get<double>();
        rep.trees.push_back(std::move(e));
      }
    for (const auto& e : j.at("energies"))
      rep.energies.push_back({e.at("node").get<int>(), e.at("energy_j").get<double>()});
    rep.max_energy_j = j.at("max_energy_j").get<double>();
    rep.argmax_node = j.at("argmax_node").get<int>();
    if (j.contains("battery_e0_j")) rep.battery_e0_j = j["battery_e0_j"].get<double>();
    if (j.contains("cycles")) rep.cycles = j["cycles"].get<long long>();
    if (j.contains("gap_rel")) rep.gap_rel = j["gap_rel"].get<double>();
    if (j.contains("exact"))
      for (auto it = j["exact"].begin(); it != j["exact"].end(); ++it)
        rep.exact.emplace_back(it.key(), it.value().get<std::string>());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  return rep;
}

std::string report_to_csv(const Report& rep) {
  std::ostringstream out;
  out << "record,id_a,id_b,value,unit\n";
  out << "schema,,," << rep.schema << ",\n";
  out << "service,,," << rep.service << ",\n";
  out << "solver,,," << rep.solver << ",\n";
  out << "network_kind,,," << rep.network_kind << ",\n";
  out << "rate,,," << format_number(rep.rate_bit_per_s) << ",bit/s\n";
  for (const ScheduleEntry& s : rep.schedule)
    out << "time," << s.tx << "," << s.rx << "," << format_number(s.time_s) << ",s\n";
  for (const TreeEntry& t : rep.trees)
    out << "tree_weight," << t.index << "," << t.root << "," << format_number(t.weight_s)
        << ",s\n";
  for (const EnergyEntry& e : rep.energies)
    out << "energy," << e.node << ",," << format_number(e.energy_j) << ",J\n";
  out << "max_energy," << rep.argmax_node << ",," << format_number(rep.max_energy_j) << ",J\n";
  if (rep.battery_e0_j) out << "battery_e0,,," << format_number(*rep.battery_e0_j) << ",J\n";
  if (rep.cycles) out << "cycles,,," << *rep.cycles << ",count\n";
  if (rep.gap_rel) out << "gap_rel,,," << format_number(*rep.gap_rel) << ",ratio\n";
  for (const auto& [k, v] : rep.exact) out << "exact," << k << ",," << v << ",\n";
  return out.str();
}

void write_report(const Report& rep, const OutputConfig& out) {
  const std::string text =
      out.format == ReportFormat::json ? report_to_json(rep) : report_to_csv(rep);
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw ConfigError("cannot write report to " + out.path);
  f << text;
  if (!f.good()) throw ConfigError("failed while writing " + out.path);
}

Report read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read report file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

}  // namespace lifemax::io
