#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "lifemax/errors.hpp"
#include "lifemax/network.hpp"
#include "lifemax/trees.hpp"

namespace lifemax {

using Link = std::pair<int, int>;  // (transmitter, receiver)

/// Per-link transmission durations at a common rate c0. The ordered map
/// keeps reports and iteration deterministic.
template <typename Scalar>
struct LinkSchedule {
  std::map<Link, Scalar> times;
  Scalar rate{};
};

/// Weighted set of oriented spanning trees rooted at the broadcast source.
template <typename Scalar>
struct BroadcastPlan {
  int source = 0;
  std::vector<OrientedTree> trees;
  VectorX<Scalar> weights;  // duration per tree, aligned with `trees`
  Scalar rate{};
};

/// Cycle count until the most loaded node drains its battery.
struct Cycles {
  bool unbounded = false;  // no node consumes energy at all
  long long count = 0;
};

template <typename Scalar>
struct EnergyReport {
  std::vector<int> node_ids;  // ascending
  VectorX<Scalar> energy;     // joules per node, aligned with node_ids
  Scalar max_energy{};
  int argmax_node = 0;        // smallest id attaining the maximum
  std::optional<Cycles> cycles;

  const Scalar& energy_of(int id) const {
    for (std::size_t r = 0; r < node_ids.size(); ++r)
      if (node_ids[r] == id) return energy(static_cast<Eigen::Index>(r));
    throw DomainError("EnergyReport: unknown node id");
  }
};

namespace detail {

template <typename Scalar>
EnergyReport<Scalar> finalize_report(std::vector<int> ids, VectorX<Scalar> energy) {
  EnergyReport<Scalar> rep;
  rep.node_ids = std::move(ids);
  rep.energy = std::move(energy);
  rep.max_energy = Scalar(0);
  rep.argmax_node = rep.node_ids.empty() ? 0 : rep.node_ids.front();
  for (Eigen::Index r = 0; r < rep.energy.size(); ++r)
    if (rep.energy(r) > rep.max_energy) {
      rep.max_energy = rep.energy(r);
      rep.argmax_node = rep.node_ids[static_cast<std::size_t>(r)];
    }
  return rep;
}

}  // namespace detail

/// Node energies of an m2m schedule: E_i = P0 * sum_j invgain(i,j) * t_ij.
/// Collectors never transmit and report zero.
template <typename Scalar>
EnergyReport<Scalar> node_energies_m2m(const LinkSchedule<Scalar>& s, const PairGain<Scalar>& pg,
                                       const std::set<int>& collectors, const Scalar& p0) {
  const int n = static_cast<int>(pg.ids.size());
  VectorX<Scalar> energy(n);
  energy.setZero();
  std::map<int, int> row;
  for (int r = 0; r < n; ++r) row[pg.ids[r]] = r;
  for (const auto& [link, t] : s.times) {
    const auto& [i, j] = link;
    if (!pg.has(i) || !pg.has(j))
      throw InvariantError("node_energies_m2m: schedule references unknown node");
    if (i == j) throw InvariantError("node_energies_m2m: self-link in schedule");
    if (collectors.count(i))
      throw InvariantError("node_energies_m2m: collector " + std::to_string(i) + " transmits");
    if (t < Scalar(0)) throw InvariantError("node_energies_m2m: negative duration");
    energy(row[i]) += p0 * pg(i, j) * t;
  }
  return detail::finalize_report(pg.ids, std::move(energy));
}

inline EnergyReport<double> node_energies_m2m(const LinkSchedule<double>& s, const Network& net,
                                              const GainSpec& g, double p0) {
  return node_energies_m2m(s, pairwise_inverse_gains(net, g), net.collectors(), p0);
}

/// Node energies of a broadcast plan: each tree charges its transmitters
/// for the tree's duration, E_i = P0 * sum_r w_r * sum_{(i,j) in tree r} invgain(i,j).
template <typename Scalar>
EnergyReport<Scalar> node_energies_broadcast(const BroadcastPlan<Scalar>& plan,
                                             const PairGain<Scalar>& pg, const Scalar& p0) {
  if (plan.weights.size() != static_cast<Eigen::Index>(plan.trees.size()))
    throw InvariantError("node_energies_broadcast: weights must align with trees");
  const int n = static_cast<int>(pg.ids.size());
  VectorX<Scalar> energy(n);
  energy.setZero();
  std::map<int, int> row;
  for (int r = 0; r < n; ++r) row[pg.ids[r]] = r;
  for (std::size_t tr = 0; tr < plan.trees.size(); ++tr) {
    const Scalar& w = plan.weights(static_cast<Eigen::Index>(tr));
    if (w < Scalar(0)) throw InvariantError("node_energies_broadcast: negative weight");
    if (plan.trees[tr].root != plan.source)
      throw InvariantError("node_energies_broadcast: tree not rooted at the source");
    for (const auto& [i, j] : plan.trees[tr].edges) {
      if (!pg.has(i) || !pg.has(j))
        throw InvariantError("node_energies_broadcast: tree references unknown node");
      energy(row[i]) += p0 * pg(i, j) * w;
    }
  }
  return detail::finalize_report(pg.ids, std::move(energy));
}

inline EnergyReport<double> node_energies_broadcast(const BroadcastPlan<double>& plan,
                                                    const Network& net, const GainSpec& g,
                                                    double p0) {
  return node_energies_broadcast(plan, pairwise_inverse_gains(net, g), p0);
}

/// Number of whole task cycles a battery E0 sustains: floor(E0 / max energy),
/// unbounded when nothing is consumed.
template <typename Scalar>
Cycles lifetime_cycles(const EnergyReport<Scalar>& rep, const Scalar& e0) {
  if (e0 < Scalar(0)) throw DomainError("lifetime_cycles: negative battery energy");
  if (rep.max_energy == Scalar(0)) return Cycles{true, 0};
  if constexpr (std::is_same_v<Scalar, Rational>)
    return Cycles{false, rational_floor_div(e0, rep.max_energy)};
  else
    return Cycles{false, static_cast<long long>(std::floor(to_double(e0) / to_double(rep.max_energy)))};
}

/// A network with all coordinates scaled by lambda, plus the factor
/// lambda^a by which every node energy of a fixed schedule scales.
struct RescaledNetwork {
  Network network;
  double energy_factor = 1.0;
};

/// Only a pure power law r^a is scale covariant; mixtures change shape
/// under rescaling and are rejected.
inline RescaledNetwork rescale_distances(const Network& net, const GainSpec& g, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("rescale_distances: factor must be positive");
  if (!g.single_term())
    throw DomainError("rescale_distances: gain mixtures are not scale covariant");
  return RescaledNetwork{net.rescaled(lambda), std::pow(lambda, g.exponents()(0))};
}

}  // namespace lifemax
