#pragma once

#include <type_traits>

#include "lifemax/errors.hpp"
#include "lifemax/network.hpp"
#include "lifemax/schedule.hpp"
#include "lifemax/trees.hpp"

namespace lifemax {

namespace detail {

// Tiny negative values are rounding noise and snap to zero; anything
// beyond the slack means the closed form does not apply to this gain table.
// Taken by value so expression-template scalars materialize at the call.
template <typename Scalar>
Scalar checked_duration(Scalar t, const char* what) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    if (t < Scalar(0)) throw InapplicableError(std::string(what) + ": negative duration");
    return t;
  } else {
    if (t < Scalar(-1e-9)) throw InapplicableError(std::string(what) + ": negative duration");
    return t < Scalar(0) ? Scalar(0) : t;
  }
}

template <typename Scalar>
void check_line_inputs(const VectorX<Scalar>& gamma_inv, const VectorX<Scalar>& q,
                       const Scalar& c0, const char* what) {
  if (gamma_inv.size() < 1) throw DomainError(std::string(what) + ": empty gain table");
  if (!(c0 > Scalar(0))) throw DomainError(std::string(what) + ": rate must be positive");
  for (Eigen::Index r = 0; r < gamma_inv.size(); ++r)
    if (!(gamma_inv(r) > Scalar(0)))
      throw DomainError(std::string(what) + ": gains must be positive");
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (!(q(i) > Scalar(0))) throw DomainError(std::string(what) + ": traffic must be positive");
}

}  // namespace detail

/// Exact schedule for N sensors on a line sending their data to the
/// collector at the origin. gamma_inv(r-1) is the inverse gain over
/// distance r; only hops to the collector and to the next sensor toward
/// it carry data. Durations are returned per link at rate c0, and every
/// sensor ends up with the same energy.
template <typename Scalar>
LinkSchedule<Scalar> solve_m2m_line(const VectorX<Scalar>& gamma_inv, const VectorX<Scalar>& q,
                                    const Scalar& c0) {
  const int n = static_cast<int>(q.size());
  if (n < 1) throw DomainError("solve_m2m_line: need at least one sensor");
  if (gamma_inv.size() < n) throw DomainError("solve_m2m_line: gain table shorter than line");
  detail::check_line_inputs(gamma_inv, q, c0, "solve_m2m_line");

  // rho_r = invgain(1) / invgain(r); the relay recurrence
  // A_2 = Q_1, A_{i+1} = Q_i + (1 - rho_i) A_i accumulates the traffic
  // sensor 1 forwards on behalf of everyone behind it.
  VectorX<Scalar> rho(n + 1);
  rho(0) = Scalar(0);  // unused, 1-based below
  for (int r = 1; r <= n; ++r) rho(r) = gamma_inv(0) / gamma_inv(r - 1);

  VectorX<Scalar> a(n + 2);
  a.setZero();
  a(2) = q(0);
  for (int i = 2; i <= n; ++i) a(i + 1) = q(i - 1) + (Scalar(1) - rho(i)) * a(i);

  LinkSchedule<Scalar> s;
  s.rate = c0;
  s.times[{1, 0}] = detail::checked_duration<Scalar>(a(n + 1) / c0, "solve_m2m_line");
  for (int i = 2; i <= n; ++i) {
    s.times[{i, 0}] = detail::checked_duration<Scalar>(rho(i) * a(i) / c0, "solve_m2m_line");
    Scalar acc(0);
    for (int k = i; k <= n; ++k) acc += q(k - 1) - rho(k) * a(k);
    s.times[{i, i - 1}] = detail::checked_duration<Scalar>(acc / c0, "solve_m2m_line");
  }
  return s;
}

inline LinkSchedule<double> solve_m2m_line(int n, const GainSpec& g, const VectorX<double>& q,
                                           double c0) {
  if (q.size() != n) throw DomainError("solve_m2m_line: traffic vector must have one entry per sensor");
  return solve_m2m_line(line_inverse_gains<double>(g, n), q, c0);
}

/// Exact broadcast plan for source k on a line of N nodes. A boundary
/// source floods along the single chain; an interior source splits time
/// across N spanning trees, one rooted detour per possible relay.
template <typename Scalar>
BroadcastPlan<Scalar> solve_broadcast_line(const VectorX<Scalar>& gamma_inv, int k,
                                           const Scalar& qk, const Scalar& c0) {
  const int n = static_cast<int>(gamma_inv.size());
  if (n < 2) throw DomainError("solve_broadcast_line: need at least two nodes");
  if (k < 1 || k > n) throw DomainError("solve_broadcast_line: source outside the line");
  VectorX<Scalar> qv(1);
  qv(0) = qk;
  detail::check_line_inputs(gamma_inv, qv, c0, "solve_broadcast_line");

  BroadcastPlan<Scalar> plan;
  plan.source = k;
  plan.rate = c0;
  if (k == 1 || k == n) {
    plan.trees = {line_chain_tree(n, k)};
    plan.weights.resize(1);
    plan.weights(0) = qk / c0;
    return plan;
  }

  VectorX<Scalar> rho(n + 1);
  rho(0) = Scalar(0);
  for (int r = 1; r <= n; ++r) rho(r) = gamma_inv(0) / gamma_inv(r - 1);

  const int m = n - k + 1;  // distance from k to the far end, plus one
  Scalar left(0), right(0);
  for (int i = 1; i <= k; ++i) left += rho(i);
  for (int i = 1; i <= m; ++i) right += rho(i);
  const Scalar denom = left + right - Scalar(1);
  const Scalar tkk = (Scalar(1) - rho(k) - rho(m)) / denom * (qk / c0);

  plan.trees = line_broadcast_trees(n, k);
  plan.weights.resize(n);
  for (int r = 1; r <= n; ++r) {
    Scalar w;
    if (r == k)
      w = tkk;
    else if (r == 1)
      w = rho(k) * (tkk + qk / c0);
    else if (r == n)
      w = rho(m) * (tkk + qk / c0);
    else if (r < k)
      w = rho(k + 1 - r) * tkk;
    else
      w = rho(r - k + 1) * tkk;
    plan.weights(r - 1) = detail::checked_duration<Scalar>(w, "solve_broadcast_line");
  }
  return plan;
}

inline BroadcastPlan<double> solve_broadcast_line(int n, const GainSpec& g, int k, double qk,
                                                  double c0) {
  return solve_broadcast_line(line_inverse_gains<double>(g, n), k, qk, c0);
}

}  // namespace lifemax
