#pragma once

#include <cmath>
#include <set>
#include <vector>

#include "lifemax/errors.hpp"
#include "lifemax/network.hpp"

namespace lifemax {

enum class LogBase { two, natural };

/// Radio parameters: receiver threshold / transmit power P0, noise power N0,
/// bandwidth B, capacity log base and the SINR feasibility threshold beta.
struct ChannelParams {
  double p0 = 1.0;
  double n0 = 1.0;
  double bandwidth = 1.0;
  LogBase log_base = LogBase::two;
  double beta = 1.1;

  void validate() const {
    if (!(p0 > 0.0)) throw DomainError("ChannelParams: P0 must be positive");
    if (!(n0 > 0.0)) throw DomainError("ChannelParams: N0 must be positive");
    if (!(bandwidth > 0.0)) throw DomainError("ChannelParams: bandwidth must be positive");
    if (beta < 0.0) throw DomainError("ChannelParams: beta must be nonnegative");
  }
};

/// log(1 + x) in the configured base.
inline double capacity_log(const ChannelParams& p, double x) {
  return p.log_base == LogBase::two ? std::log2(1.0 + x) : std::log1p(x);
}

/// Shannon-Hartley capacity B * log(1 + signal/N0).
inline double shannon_capacity(const ChannelParams& p, double signal_power) {
  p.validate();
  if (signal_power < 0.0) throw DomainError("shannon_capacity: negative signal power");
  return p.bandwidth * capacity_log(p, signal_power / p.n0);
}

/// One transmitter-receiver pair active concurrently with the link under
/// evaluation.
struct InterferencePair {
  int tx = 0;
  int rx = 0;
};

using InterferenceSet = std::vector<InterferencePair>;

/// Strict validation of an interference set against the evaluated link
/// (i, j): the link itself is excluded, and together with the link no node
/// may transmit twice or receive twice.
inline void validate_interference_set(const InterferenceSet& u, int link_tx, int link_rx) {
  std::set<int> txs{link_tx};
  std::set<int> rxs{link_rx};
  for (const auto& pair : u) {
    if (pair.tx == pair.rx) throw InvariantError("interference set: self-link pair");
    if (pair.tx == link_tx && pair.rx == link_rx)
      throw InvariantError("interference set: contains the evaluated link itself");
    if (!txs.insert(pair.tx).second)
      throw InvariantError("interference set: node " + std::to_string(pair.tx) +
                           " transmits in two concurrent pairs");
    if (!rxs.insert(pair.rx).second)
      throw InvariantError("interference set: node " + std::to_string(pair.rx) +
                           " receives in two concurrent pairs");
  }
}

/// Fixed-power SINR: transmitters radiate their own power regardless of the
/// receiver, interference is the sum of concurrently received powers.
/// `powers` is per-node transmit power in watts, aligned with net.ids().
inline double sinr_gupta_kumar(const Network& net, const GainSpec& g, const ChannelParams& p,
                               int i, int j, const InterferenceSet& u, const VectorXd& powers) {
  p.validate();
  if (i == j) throw DomainError("sinr_gupta_kumar: self-link");
  if (powers.size() != static_cast<Eigen::Index>(net.ids().size()))
    throw DomainError("sinr_gupta_kumar: powers must align with network nodes");
  validate_interference_set(u, i, j);

  auto power_of = [&](int id) {
    const auto& ids = net.ids();
    for (std::size_t r = 0; r < ids.size(); ++r)
      if (ids[r] == id) return powers(static_cast<Eigen::Index>(r));
    throw DomainError("sinr_gupta_kumar: unknown node id");
  };

  const double signal = power_of(i) / pair_inverse_gain(net, g, i, j);
  double interference = 0.0;
  for (const auto& pair : u)
    interference += power_of(pair.tx) / pair_inverse_gain(net, g, pair.tx, j);
  return signal / (p.n0 + interference);
}

/// Shannon-Hartley with the fixed-power SINR in place of P/N0 (B = 1).
inline double capacity_gupta_kumar(const Network& net, const GainSpec& g, const ChannelParams& p,
                                   int i, int j, const InterferenceSet& u,
                                   const VectorXd& powers) {
  return capacity_log(p, sinr_gupta_kumar(net, g, p, i, j, u, powers));
}

/// Transmit power needed so the receiver hears exactly P0: P0 / gain(i,j).
inline double required_power(const ChannelParams& p, const Network& net, const GainSpec& g,
                             int i, int j) {
  p.validate();
  return p.p0 * pair_inverse_gain(net, g, i, j);
}

/// Interference-free capacity of the adaptive-power model; identical for
/// all links because the received signal is always P0.
inline double max_rate(const ChannelParams& p) {
  p.validate();
  return capacity_log(p, p.p0 / p.n0);
}

/// Capacity of link (i, j) under the adaptive-power model: every concurrent
/// transmitter (k, m) radiates P0 / gain(k,m) and is heard at j through
/// gain(k,j), so the interference term is P0 * invgain(k,m) / invgain(k,j).
inline double capacity_adaptive(const Network& net, const GainSpec& g, const ChannelParams& p,
                                int i, int j, const InterferenceSet& u) {
  p.validate();
  if (i == j) throw DomainError("capacity_adaptive: self-link");
  validate_interference_set(u, i, j);
  double interference = 0.0;
  for (const auto& pair : u)
    interference += pair_inverse_gain(net, g, pair.tx, pair.rx) /
                    pair_inverse_gain(net, g, pair.tx, j);
  return capacity_log(p, p.p0 / (p.n0 + p.p0 * interference));
}

/// True when the SINR clears the feasibility threshold beta (inclusive).
inline bool link_feasible(double sinr, const ChannelParams& p) {
  p.validate();
  if (sinr < 0.0) throw DomainError("link_feasible: negative SINR");
  return sinr >= p.beta;
}

/// Fixed-power capacity without interference: log(1 + (P0/N0) * gain(i,j)).
/// Still distance dependent because the power is not adapted.
inline double capacity_gk_no_interference(const Network& net, const GainSpec& g,
                                          const ChannelParams& p, int i, int j) {
  p.validate();
  if (i == j) throw DomainError("capacity_gk_no_interference: self-link");
  return capacity_log(p, (p.p0 / p.n0) / pair_inverse_gain(net, g, i, j));
}

/// Small-signal linearization log(1+x) ~ x of the fixed-power capacity,
/// valid for x < 1. The identity holds in natural log; base 2 divides by ln 2.
inline double linearized_gk_capacity(const Network& net, const GainSpec& g,
                                     const ChannelParams& p, int i, int j) {
  p.validate();
  if (i == j) throw DomainError("linearized_gk_capacity: self-link");
  const double x = (p.p0 / p.n0) / pair_inverse_gain(net, g, i, j);
  if (!(x < 1.0))
    throw DomainError("linearized_gk_capacity: (P0/N0)*gain = " + std::to_string(x) +
                      " is outside the linearization domain x < 1");
  return p.log_base == LogBase::two ? x / std::log(2.0) : x;
}

}  // namespace lifemax
