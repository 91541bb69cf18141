#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lifemax/channel.hpp"
#include "lifemax/errors.hpp"
#include "lifemax/network.hpp"
#include "lifemax/schedule.hpp"
#include "lifemax/simplex.hpp"
#include "lifemax/trees.hpp"

namespace lifemax {

/// min over x >= 0 of max_i load_i'x  subject to  eq x = eq_rhs.
/// load_ids names the node behind each load row; var_names is optional
/// and only feeds error messages and reports.
template <typename Scalar>
struct MinimaxProblem {
  MatrixX<Scalar> eq;
  VectorX<Scalar> eq_rhs;
  MatrixX<Scalar> load;
  std::vector<int> load_ids;
  std::vector<std::string> var_names;
};

template <typename Scalar>
struct MinimaxSolution {
  VectorX<Scalar> x;
  Scalar value{};            // the minimized maximum load
  VectorX<Scalar> node_load; // per load row at the optimum
  long iterations = 0;
};

/// Epigraph reformulation: one extra variable z bounds every load row,
/// minimize z. The optimum is certified against the LP duals before it
/// is returned; a failed certificate is a solver bug, not a user error.
template <typename Scalar>
MinimaxSolution<Scalar> solve_minimax(const MinimaxProblem<Scalar>& p,
                                      long max_iterations = 50000) {
  const Eigen::Index nv = p.eq.cols();
  if (p.load.cols() != nv)
    throw DomainError("solve_minimax: eq and load must share the variable set");
  if (p.eq.rows() != p.eq_rhs.size())
    throw DomainError("solve_minimax: eq rhs size mismatch");
  if (p.load.rows() != static_cast<Eigen::Index>(p.load_ids.size()))
    throw DomainError("solve_minimax: load_ids size mismatch");
  if (!p.var_names.empty() && p.var_names.size() != static_cast<std::size_t>(nv))
    throw DomainError("solve_minimax: var_names size mismatch");

  const Eigen::Index me = p.eq.rows();
  const Eigen::Index ml = p.load.rows();
  LinearProgram<Scalar> lp;
  lp.a.resize(me + ml, nv + 1);
  lp.a.setZero();
  lp.b.resize(me + ml);
  lp.c.resize(nv + 1);
  lp.c.setZero();
  lp.c(nv) = Scalar(1);
  lp.rows.assign(static_cast<std::size_t>(me + ml), RowType::eq);
  for (Eigen::Index i = 0; i < me; ++i) {
    lp.a.row(i).head(nv) = p.eq.row(i);
    lp.b(i) = p.eq_rhs(i);
  }
  for (Eigen::Index i = 0; i < ml; ++i) {
    lp.a.row(me + i).head(nv) = p.load.row(i);
    lp.a(me + i, nv) = Scalar(-1);
    lp.b(me + i) = Scalar(0);
    lp.rows[static_cast<std::size_t>(me + i)] = RowType::le;
  }

  const LpResult<Scalar> res = solve_simplex(lp, max_iterations);
  if (res.status == LpStatus::infeasible)
    throw InfeasibleError("solve_minimax: no schedule satisfies the flow constraints");
  if (res.status == LpStatus::unbounded)
    throw UnboundedError("solve_minimax: objective unbounded below");

  const LpResiduals<Scalar> cert = certify_optimal(lp, res);
  const Scalar tol = detail::lp_eps<Scalar>() == Scalar(0)
                         ? Scalar(0)
                         : Scalar(1e-8 * (1.0 + to_double(res.objective)));
  if (cert.worst() > tol)
    throw InvariantError("solve_minimax: optimum failed certification");

  MinimaxSolution<Scalar> sol;
  sol.x = res.x.head(nv);
  sol.value = res.objective;
  sol.node_load = ml > 0 ? VectorX<Scalar>(p.load * sol.x) : VectorX<Scalar>();
  sol.iterations = res.iterations;
  return sol;
}

/// m2m transfer LP over explicit link variables, one per ordered pair
/// (sensor, any other node). `links` records the variable order.
template <typename Scalar>
struct M2mLp {
  MinimaxProblem<Scalar> problem;
  std::vector<Link> links;
  Scalar rate{};
};

/// Flow conservation per sensor at common rate c0 plus one energy row
/// per sensor. Collectors only absorb data. q is ordered by ascending
/// sensor id.
template <typename Scalar>
M2mLp<Scalar> m2m_lp(const PairGain<Scalar>& pg, const std::set<int>& collectors,
                     const VectorX<Scalar>& q, const Scalar& c0, const Scalar& p0) {
  if (!(c0 > Scalar(0))) throw DomainError("m2m_lp: rate must be positive");
  if (!(p0 > Scalar(0))) throw DomainError("m2m_lp: transmit power must be positive");
  for (int c : collectors)
    if (!pg.has(c)) throw DomainError("m2m_lp: unknown collector id");
  std::vector<int> sensors;
  for (int id : pg.ids)
    if (!collectors.count(id)) sensors.push_back(id);
  if (sensors.empty()) throw DomainError("m2m_lp: no sensors");
  if (q.size() != static_cast<Eigen::Index>(sensors.size()))
    throw DomainError("m2m_lp: one traffic entry per sensor required");
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (!(q(i) > Scalar(0))) throw DomainError("m2m_lp: traffic must be positive");

  M2mLp<Scalar> out;
  out.rate = c0;
  for (int i : sensors)
    for (int j : pg.ids)
      if (j != i) out.links.push_back({i, j});

  std::map<int, int> srow;
  for (std::size_t s = 0; s < sensors.size(); ++s) srow[sensors[s]] = static_cast<int>(s);
  const Eigen::Index nv = static_cast<Eigen::Index>(out.links.size());
  const Eigen::Index ns = static_cast<Eigen::Index>(sensors.size());
  auto& prob = out.problem;
  prob.eq.resize(ns, nv);
  prob.eq.setZero();
  prob.eq_rhs = q;
  prob.load.resize(ns, nv);
  prob.load.setZero();
  prob.load_ids = sensors;
  for (Eigen::Index v = 0; v < nv; ++v) {
    const auto& [i, j] = out.links[static_cast<std::size_t>(v)];
    prob.eq(srow[i], v) += c0;
    if (auto it = srow.find(j); it != srow.end()) prob.eq(it->second, v) -= c0;
    prob.load(srow[i], v) = p0 * pg(i, j);
    prob.var_names.push_back("t[" + std::to_string(i) + "->" + std::to_string(j) + "]");
  }
  return out;
}

inline M2mLp<double> m2m_lp(const Network& net, const GainSpec& g, const VectorX<double>& q,
                            double c0, double p0) {
  return m2m_lp(pairwise_inverse_gains(net, g), net.collectors(), q, c0, p0);
}

template <typename Scalar>
LinkSchedule<Scalar> schedule_from(const M2mLp<Scalar>& model, const MinimaxSolution<Scalar>& sol) {
  if (sol.x.size() != static_cast<Eigen::Index>(model.links.size()))
    throw DomainError("schedule_from: solution does not match the model");
  LinkSchedule<Scalar> s;
  s.rate = model.rate;
  for (std::size_t v = 0; v < model.links.size(); ++v)
    if (sol.x(static_cast<Eigen::Index>(v)) > Scalar(0))
      s.times[model.links[v]] = sol.x(static_cast<Eigen::Index>(v));
  return s;
}

/// Broadcast LP over spanning-tree variables. One delivery row per
/// destination is emitted even though they coincide for spanning trees;
/// the solver is expected to cope with the redundancy.
template <typename Scalar>
struct BroadcastLpModel {
  MinimaxProblem<Scalar> problem;
  std::vector<OrientedTree> trees;
  int source = 0;
  Scalar rate{};
};

template <typename Scalar>
BroadcastLpModel<Scalar> broadcast_lp(const PairGain<Scalar>& pg,
                                      const std::vector<OrientedTree>& trees, int source,
                                      const Scalar& qk, const Scalar& c0, const Scalar& p0) {
  if (!(c0 > Scalar(0))) throw DomainError("broadcast_lp: rate must be positive");
  if (!(p0 > Scalar(0))) throw DomainError("broadcast_lp: transmit power must be positive");
  if (!(qk > Scalar(0))) throw DomainError("broadcast_lp: traffic must be positive");
  if (!pg.has(source)) throw DomainError("broadcast_lp: unknown source id");
  if (trees.empty())
    throw InfeasibleError("broadcast_lp: no spanning trees to schedule");
  std::set<OrientedTree> distinct;
  for (const auto& t : trees) {
    if (t.root != source) throw DomainError("broadcast_lp: tree not rooted at the source");
    validate_tree(t, pg.ids);
    if (!distinct.insert(t).second) throw DomainError("broadcast_lp: duplicate tree");
  }

  BroadcastLpModel<Scalar> out;
  out.trees = trees;
  out.source = source;
  out.rate = c0;
  const Eigen::Index nv = static_cast<Eigen::Index>(trees.size());
  const Eigen::Index n = static_cast<Eigen::Index>(pg.ids.size());
  auto& prob = out.problem;
  prob.eq.resize(n - 1, nv);
  prob.eq_rhs.resize(n - 1);
  Eigen::Index r = 0;
  for (int id : pg.ids) {
    if (id == source) continue;
    for (Eigen::Index v = 0; v < nv; ++v) prob.eq(r, v) = c0;
    prob.eq_rhs(r) = qk;
    ++r;
  }
  prob.load.resize(n, nv);
  prob.load.setZero();
  prob.load_ids = pg.ids;
  std::map<int, int> nrow;
  for (Eigen::Index i = 0; i < n; ++i) nrow[pg.ids[static_cast<std::size_t>(i)]] = static_cast<int>(i);
  for (Eigen::Index v = 0; v < nv; ++v) {
    for (const auto& [i, j] : trees[static_cast<std::size_t>(v)].edges)
      prob.load(nrow[i], v) += p0 * pg(i, j);
    prob.var_names.push_back("tree[" + std::to_string(v) + "]");
  }
  return out;
}

inline BroadcastLpModel<double> broadcast_lp(const Network& net, const GainSpec& g,
                                             const std::vector<OrientedTree>& trees, int source,
                                             double qk, double c0, double p0) {
  return broadcast_lp(pairwise_inverse_gains(net, g), trees, source, qk, c0, p0);
}

template <typename Scalar>
BroadcastPlan<Scalar> plan_from(const BroadcastLpModel<Scalar>& model,
                                const MinimaxSolution<Scalar>& sol) {
  if (sol.x.size() != static_cast<Eigen::Index>(model.trees.size()))
    throw DomainError("plan_from: solution does not match the model");
  BroadcastPlan<Scalar> plan;
  plan.source = model.source;
  plan.trees = model.trees;
  plan.weights = sol.x;
  plan.rate = model.rate;
  return plan;
}

/// m2m LP in the fixed-power regime: every node transmits at p0, each
/// link carries data at its own interference-free capacity, and energy
/// is power times airtime. Variables are airtimes, so there is no
/// common rate.
inline M2mLp<double> m2m_lp_gupta_kumar(const Network& net, const GainSpec& g,
                                        const ChannelParams& p, const VectorX<double>& q) {
  p.validate();
  auto pg = pairwise_inverse_gains(net, g);
  std::vector<int> sensors = net.sensors();
  if (sensors.empty()) throw DomainError("m2m_lp_gupta_kumar: no sensors");
  if (q.size() != static_cast<Eigen::Index>(sensors.size()))
    throw DomainError("m2m_lp_gupta_kumar: one traffic entry per sensor required");
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (!(q(i) > 0)) throw DomainError("m2m_lp_gupta_kumar: traffic must be positive");

  M2mLp<double> out;
  out.rate = 0;  // rates differ per link
  for (int i : sensors)
    for (int j : pg.ids)
      if (j != i) out.links.push_back({i, j});
  std::map<int, int> srow;
  for (std::size_t s = 0; s < sensors.size(); ++s) srow[sensors[s]] = static_cast<int>(s);
  const Eigen::Index nv = static_cast<Eigen::Index>(out.links.size());
  const Eigen::Index ns = static_cast<Eigen::Index>(sensors.size());
  auto& prob = out.problem;
  prob.eq.resize(ns, nv);
  prob.eq.setZero();
  prob.eq_rhs = q;
  prob.load.resize(ns, nv);
  prob.load.setZero();
  prob.load_ids = sensors;
  for (Eigen::Index v = 0; v < nv; ++v) {
    const auto& [i, j] = out.links[static_cast<std::size_t>(v)];
    const double cap = capacity_gk_no_interference(net, g, p, i, j);
    prob.eq(srow[i], v) += cap;
    if (auto it = srow.find(j); it != srow.end()) prob.eq(it->second, v) -= cap;
    prob.load(srow[i], v) = p.p0;
    prob.var_names.push_back("t[" + std::to_string(i) + "->" + std::to_string(j) + "]");
  }
  return out;
}

/// One link activation inside a concurrency slot: ship `data` bits from
/// tx to rx while the other links of the slot are on the air.
struct ConcurrentLink {
  int tx = 0;
  int rx = 0;
  double data = 0;
};

using Slot = std::vector<ConcurrentLink>;

struct ConcurrentEvaluation {
  double total_time = 0;
  std::vector<double> slot_times;
  EnergyReport<double> energies;
};

/// Plays back a slotted schedule under mutual interference. All
/// endpoints in a slot must be pairwise distinct; each link runs at its
/// interfered capacity for exactly as long as its data needs, and the
/// slot lasts as long as its slowest link.
inline ConcurrentEvaluation evaluate_concurrent_schedule(const Network& net, const GainSpec& g,
                                                         const ChannelParams& p,
                                                         const std::vector<Slot>& slots) {
  p.validate();
  const std::vector<int>& ids = net.ids();
  std::map<int, int> row;
  for (std::size_t r = 0; r < ids.size(); ++r) row[ids[r]] = static_cast<int>(r);
  VectorX<double> energy(static_cast<Eigen::Index>(ids.size()));
  energy.setZero();
  ConcurrentEvaluation ev;
  for (const Slot& slot : slots) {
    std::set<int> seen;
    for (const ConcurrentLink& l : slot) {
      if (!net.has(l.tx) || !net.has(l.rx))
        throw DomainError("evaluate_concurrent_schedule: unknown node in slot");
      if (l.tx == l.rx) throw DomainError("evaluate_concurrent_schedule: self-link in slot");
      if (l.data < 0) throw DomainError("evaluate_concurrent_schedule: negative data");
      if (!seen.insert(l.tx).second || !seen.insert(l.rx).second)
        throw DomainError("evaluate_concurrent_schedule: node reused within a slot");
    }
    double slot_time = 0;
    for (std::size_t a = 0; a < slot.size(); ++a) {
      InterferenceSet u;
      for (std::size_t b = 0; b < slot.size(); ++b)
        if (b != a) u.push_back({slot[b].tx, slot[b].rx});
      const double cap = capacity_adaptive(net, g, p, slot[a].tx, slot[a].rx, u);
      if (!(cap > 0)) {
        if (slot[a].data > 0)
          throw UndeliverableError("evaluate_concurrent_schedule: link has zero capacity");
        continue;
      }
      const double t = slot[a].data / cap;
      energy(row[slot[a].tx]) += p.p0 * pair_inverse_gain(net, g, slot[a].tx, slot[a].rx) * t;
      slot_time = std::max(slot_time, t);
    }
    ev.slot_times.push_back(slot_time);
    ev.total_time += slot_time;
  }
  ev.energies = detail::finalize_report<double>(ids, std::move(energy));
  return ev;
}

}  // namespace lifemax
