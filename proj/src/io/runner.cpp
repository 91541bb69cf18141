#include "lifemax/io/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <type_traits>

#include "lifemax/closed_form.hpp"
#include "lifemax/errors.hpp"
#include "lifemax/minimax.hpp"
#include "lifemax/schedule.hpp"
#include "lifemax/trees.hpp"

namespace lifemax::io {
namespace {

template <typename S>
PairGain<S> pair_gains(const Network& net, const GainSpec& g) {
  if constexpr (std::is_same_v<S, Rational>)
    return pairwise_inverse_gains_exact(net, g);
  else
    return pairwise_inverse_gains(net, g);
}

template <typename S>
S from_double(double v) {
  if constexpr (std::is_same_v<S, Rational>)
    return to_rational(v);
  else
    return v;
}

void push_exact(Report& rep, std::string key, const Rational& v) {
  rep.exact.emplace_back(std::move(key), lifemax::to_string(v));
}

template <typename S>
void fill_energies(Report& rep, const EnergyReport<S>& er) {
  rep.energies.clear();
  for (std::size_t i = 0; i < er.node_ids.size(); ++i)
    rep.energies.push_back(
        {er.node_ids[i], to_double(er.energy(static_cast<Eigen::Index>(i)))});
  rep.max_energy_j = to_double(er.max_energy);
  rep.argmax_node = er.argmax_node;
  if constexpr (std::is_same_v<S, Rational>) {
    for (std::size_t i = 0; i < er.node_ids.size(); ++i)
      push_exact(rep, "E[" + std::to_string(er.node_ids[i]) + "]",
                 er.energy(static_cast<Eigen::Index>(i)));
    push_exact(rep, "max_energy_j", er.max_energy);
  }
}

template <typename S>
void fill_schedule(Report& rep, const LinkSchedule<S>& s) {
  for (const auto& [link, t] : s.times) {
    rep.schedule.push_back({link.first, link.second, to_double(t)});
    if constexpr (std::is_same_v<S, Rational>)
      push_exact(rep, "t[" + std::to_string(link.first) + "->" +
                          std::to_string(link.second) + "]",
                 t);
  }
}

template <typename S>
void fill_plan(Report& rep, const BroadcastPlan<S>& plan) {
  for (std::size_t i = 0; i < plan.trees.size(); ++i) {
    TreeEntry e;
    e.index = static_cast<int>(i);
    e.root = plan.trees[i].root;
    e.edges = plan.trees[i].edges;
    e.weight_s = to_double(plan.weights(static_cast<Eigen::Index>(i)));
    rep.trees.push_back(std::move(e));
    if constexpr (std::is_same_v<S, Rational>)
      push_exact(rep, "w[" + std::to_string(i) + "]",
                 plan.weights(static_cast<Eigen::Index>(i)));
  }
}

// Relative closed-form vs LP disagreement. The closed forms are proven
// optimal on line networks, so anything above the gap limit means they
// were applied outside their domain.
template <typename S>
void check_gap(Report& rep, const S& cf, const S& lp) {
  if (!(lp > S(0))) throw InvariantError("run: LP optimum is not positive");
  const S diff = cf > lp ? S(cf - lp) : S(lp - cf);
  const S gap = S(diff / lp);
  if constexpr (std::is_same_v<S, Rational>) {
    if (gap != S(0))
      throw InapplicableError("closed form and LP oracle disagree exactly (gap " +
                              lifemax::to_string(gap) + ")");
    rep.gap_rel = 0.0;
    push_exact(rep, "gap_rel", S(0));
  } else {
    if (to_double(gap) > kGapLimit)
      throw InapplicableError("closed form and LP oracle disagree (relative gap " +
                              format_number(to_double(gap)) + ")");
    rep.gap_rel = to_double(gap);
  }
}

std::vector<OrientedTree> cli_broadcast_trees(const Network& net, int k, bool line) {
  const int n = net.size();
  if (n <= kTreeEnumerationCap || !line) return enumerate_spanning_trees(net, k);
  // Larger lines fall back to the tree family the closed form uses.
  if (k == 1 || k == n) return {line_chain_tree(n, k)};
  return line_broadcast_trees(n, k);
}

template <typename S>
void add_cycles(Report& rep, const RunConfig& cfg, const EnergyReport<S>& er) {
  if (!cfg.battery_e0) return;
  rep.battery_e0_j = *cfg.battery_e0;
  const Cycles c = lifetime_cycles(er, from_double<S>(*cfg.battery_e0));
  if (!c.unbounded) rep.cycles = c.count;
}

template <typename S>
Report solve_report(const RunConfig& cfg) {
  const Network net = build_network(cfg.network);
  const GainSpec g = cfg.make_gain();
  const double c0d = cfg.common_rate();
  if (!(c0d > 0)) throw ConfigError("config channel: derived rate is not positive");
  const S c0 = from_double<S>(c0d);
  const S p0 = from_double<S>(cfg.channel.p0);
  const bool line = cfg.network.kind == "line";
  const bool want_cf = cfg.solver != SolverChoice::lp;
  const bool want_lp = cfg.solver != SolverChoice::closed_form;

  Report rep;
  rep.service = to_string(cfg.service.kind);
  rep.solver = to_string(cfg.solver);
  rep.network_kind = cfg.network.kind;
  rep.node_ids = net.ids();
  std::sort(rep.node_ids.begin(), rep.node_ids.end());
  rep.rate_bit_per_s = c0d;
  if constexpr (std::is_same_v<S, Rational>) push_exact(rep, "rate_bit_per_s", c0);

  const PairGain<S> pg = pair_gains<S>(net, g);

  if (cfg.service.kind == ServiceKind::m2m) {
    const int ns = static_cast<int>(net.sensors().size());
    VectorX<S> q(ns);
    for (int i = 0; i < ns; ++i) q(i) = from_double<S>(cfg.service.q[static_cast<std::size_t>(i)]);

    std::optional<LinkSchedule<S>> cf_sched;
    std::optional<EnergyReport<S>> cf_rep, lp_rep;
    std::optional<LinkSchedule<S>> lp_sched;
    if (want_cf) {
      cf_sched = solve_m2m_line<S>(line_inverse_gains<S>(g, ns), q, c0);
      cf_rep = node_energies_m2m(*cf_sched, pg, net.collectors(), p0);
    }
    if (want_lp) {
      const auto model = m2m_lp<S>(pg, net.collectors(), q, c0, p0);
      const auto sol = solve_minimax(model.problem);
      lp_sched = schedule_from(model, sol);
      lp_rep = node_energies_m2m(*lp_sched, pg, net.collectors(), p0);
    }
    if (cf_rep && lp_rep) check_gap<S>(rep, cf_rep->max_energy, lp_rep->max_energy);
    const LinkSchedule<S>& sched = cf_sched ? *cf_sched : *lp_sched;
    const EnergyReport<S>& er = cf_rep ? *cf_rep : *lp_rep;
    fill_schedule(rep, sched);
    fill_energies(rep, er);
    add_cycles(rep, cfg, er);
  } else {
    const int n = net.size();
    const int k = cfg.service.source;
    const S qk = from_double<S>(cfg.service.qk);

    std::optional<BroadcastPlan<S>> cf_plan, lp_plan;
    std::optional<EnergyReport<S>> cf_rep, lp_rep;
    if (want_cf) {
      cf_plan = solve_broadcast_line<S>(line_inverse_gains<S>(g, n), k, qk, c0);
      cf_rep = node_energies_broadcast(*cf_plan, pg, p0);
    }
    if (want_lp) {
      const auto trees = cli_broadcast_trees(net, k, line);
      const auto model = broadcast_lp<S>(pg, trees, k, qk, c0, p0);
      const auto sol = solve_minimax(model.problem);
      lp_plan = plan_from(model, sol);
      lp_rep = node_energies_broadcast(*lp_plan, pg, p0);
    }
    if (cf_rep && lp_rep) check_gap<S>(rep, cf_rep->max_energy, lp_rep->max_energy);
    const BroadcastPlan<S>& plan = cf_plan ? *cf_plan : *lp_plan;
    const EnergyReport<S>& er = cf_rep ? *cf_rep : *lp_rep;
    fill_plan(rep, plan);
    fill_energies(rep, er);
    add_cycles(rep, cfg, er);
  }
  return rep;
}

void check_rational_preconditions(const RunConfig& cfg) {
  if (!cfg.make_gain().integer_exponents())
    throw ConfigError("rational mode requires integer gain exponents");
  // Pairwise distances must be integral too; the exact gain table
  // construction rejects networks where they are not.
}

RunOutcome failure(const std::exception& e) {
  RunOutcome out;
  out.message = e.what();
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ResourceLimitError*>(&e) ||
      dynamic_cast<const DomainError*>(&e))
    out.exit_code = kExitConfig;
  else if (dynamic_cast<const InapplicableError*>(&e))
    out.exit_code = kExitInapplicable;
  else if (dynamic_cast<const InfeasibleError*>(&e) ||
           dynamic_cast<const UndeliverableError*>(&e))
    out.exit_code = kExitInfeasible;
  else
    out.exit_code = kExitInternal;
  if (out.exit_code == kExitInapplicable)
    out.message += "; rerun with solver=lp";
  return out;
}

}  // namespace

RunOutcome run_config(const RunConfig& cfg, bool rational) {
  try {
    validate_config(cfg);
    if (rational) check_rational_preconditions(cfg);
    Report rep = rational ? solve_report<Rational>(cfg) : solve_report<double>(cfg);
    write_report(rep, cfg.output);
    RunOutcome out;
    out.report = std::move(rep);
    out.message = "max energy " + format_number(out.report->max_energy_j) + " J" +
                  (cfg.output.path.empty() ? "" : ", report written to " + cfg.output.path);
    return out;
  } catch (const std::exception& e) {
    return failure(e);
  }
}

RunOutcome validate_only(const RunConfig& cfg) {
  try {
    validate_config(cfg);
    const Network net = build_network(cfg.network);
    std::ostringstream msg;
    msg << "valid: " << to_string(cfg.service.kind) << " on " << cfg.network.kind
        << " network with " << net.size() << " nodes, solver " << to_string(cfg.solver)
        << ", rate " << format_number(cfg.common_rate()) << " bit/s";
    RunOutcome out;
    out.message = msg.str();
    return out;
  } catch (const std::exception& e) {
    return failure(e);
  }
}

namespace {

// Sweep rows reuse the run path; each parameter rewrites one config
// field. lambda_scale turns a line into explicit scaled coordinates, so
// those rows always solve with the LP.
RunConfig apply_param(const RunConfig& base, const std::string& param, double v) {
  RunConfig cfg = base;
  cfg.output = OutputConfig{};  // rows never write their own reports
  if (param == "N") {
    if (cfg.network.kind != "line")
      throw ConfigError("sweep N: requires a line network");
    if (v < 1 || v != std::floor(v)) throw ConfigError("sweep N: values must be integers >= 1");
    cfg.network.n = static_cast<int>(v);
    if (cfg.service.kind == ServiceKind::m2m) {
      for (double q : base.service.q)
        if (q != base.service.q.front())
          throw ConfigError("sweep N: m2m traffic must be uniform");
      cfg.service.q.assign(static_cast<std::size_t>(cfg.network.n), base.service.q.front());
    }
  } else if (param == "a") {
    if (cfg.gain_exponents.size() != 1)
      throw ConfigError("sweep a: requires a single-term gain");
    cfg.gain_exponents = {v};
    cfg.gain_lambdas = {1.0};
  } else if (param == "lambda_scale") {
    if (!(v > 0)) throw ConfigError("sweep lambda_scale: values must be positive");
    const Network net = build_network(base.network);
    const RescaledNetwork rs = rescale_distances(net, base.make_gain(), v);
    NetworkConfig nc;
    nc.kind = "explicit";
    nc.n = rs.network.size();
    for (int id : rs.network.ids()) {
      nc.ids.push_back(id);
      const auto row = rs.network.position(id);
      nc.positions.emplace_back(row.begin(), row.end());
    }
    for (int c : net.collectors()) nc.collectors.push_back(c);
    cfg.network = nc;
    cfg.solver = SolverChoice::lp;
  } else if (param == "P0_over_N0") {
    if (!(v > 0)) throw ConfigError("sweep P0_over_N0: values must be positive");
    cfg.channel.p0 = v * cfg.channel.n0;
  } else if (param == "k") {
    if (cfg.service.kind != ServiceKind::broadcast)
      throw ConfigError("sweep k: only applies to broadcast services");
    if (v != std::floor(v)) throw ConfigError("sweep k: values must be integers");
    cfg.service.source = static_cast<int>(v);
  } else {
    throw ConfigError("sweep: unknown parameter " + param +
                      " (expected N, a, lambda_scale, P0_over_N0 or k)");
  }
  return cfg;
}

}  // namespace

RunOutcome run_sweep(const RunConfig& cfg, const SweepSpec& spec, bool rational) {
  try {
    validate_config(cfg);
    std::vector<std::pair<double, Report>> rows;
    for (double v : spec.values) {
      const RunConfig row_cfg = apply_param(cfg, spec.param, v);
      validate_config(row_cfg);
      if (rational) check_rational_preconditions(row_cfg);
      rows.emplace_back(v, rational ? solve_report<Rational>(row_cfg)
                                    : solve_report<double>(row_cfg));
    }

    std::set<int> all_nodes;
    for (const auto& [v, rep] : rows)
      for (const EnergyEntry& e : rep.energies) all_nodes.insert(e.node);
    std::ostringstream out;
    out << "parameter,value,max_energy_J,cycles";
    for (int id : all_nodes) out << ",E_" << id << "_J";
    out << "\n";
    for (const auto& [v, rep] : rows) {
      out << spec.param << "," << format_number(v) << "," << format_number(rep.max_energy_j)
          << ",";
      if (rep.cycles) out << *rep.cycles;
      for (int id : all_nodes) {
        out << ",";
        const auto it = std::find_if(rep.energies.begin(), rep.energies.end(),
                                     [id](const EnergyEntry& e) { return e.node == id; });
        if (it != rep.energies.end()) out << format_number(it->energy_j);
      }
      out << "\n";
    }

    OutputConfig oc = cfg.output;
    oc.format = ReportFormat::csv;  // sweeps are tables by contract
    if (oc.path.empty()) {
      std::cout << out.str();
    } else {
      std::ofstream f(oc.path);
      if (!f) throw ConfigError("cannot write sweep table to " + oc.path);
      f << out.str();
    }
    RunOutcome res;
    res.message = "swept " + spec.param + " over " + std::to_string(spec.values.size()) +
                  " values" + (oc.path.empty() ? "" : ", table written to " + oc.path);
    return res;
  } catch (const std::exception& e) {
    return failure(e);
  }
}

}  // namespace lifemax::io
