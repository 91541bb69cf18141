#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lifemax/errors.hpp"
#include "lifemax/types.hpp"

namespace lifemax {

/// Signal-gain family: the inverse gain at range r is the convex mixture
/// sum_n lambda_n * r^(a_n) with sum lambda_n = 1, lambda_n >= 0, a_n >= 1.
class GainSpec {
 public:
  GainSpec(VectorXd lambdas, VectorXd exponents)
      : lambdas_(std::move(lambdas)), exponents_(std::move(exponents)) {
    if (lambdas_.size() == 0 || lambdas_.size() != exponents_.size())
      throw DomainError("GainSpec: lambdas and exponents must be nonempty and of equal length");
    if ((lambdas_.array() < 0.0).any())
      throw DomainError("GainSpec: mixture weights must be nonnegative");
    if ((exponents_.array() < 1.0).any())
      throw DomainError("GainSpec: path-loss exponents must be >= 1");
    double sum = 0.0;
    for (Eigen::Index n = 0; n < lambdas_.size(); ++n) sum += lambdas_(n);
    if (std::abs(sum - 1.0) > 1e-12)
      throw DomainError("GainSpec: mixture weights must sum to 1 (got " + std::to_string(sum) + ")");
    for (Eigen::Index n = 0; n < lambdas_.size(); ++n)
      if (!std::isfinite(lambdas_(n)) || !std::isfinite(exponents_(n)))
        throw DomainError("GainSpec: parameters must be finite");
  }

  /// Pure power law r^a.
  static GainSpec power_law(double a) {
    VectorXd l(1), e(1);
    l << 1.0;
    e << a;
    return GainSpec(l, e);
  }

  const VectorXd& lambdas() const { return lambdas_; }
  const VectorXd& exponents() const { return exponents_; }
  Eigen::Index terms() const { return lambdas_.size(); }

  bool single_term() const { return lambdas_.size() == 1; }

  bool integer_exponents() const {
    for (Eigen::Index n = 0; n < exponents_.size(); ++n)
      if (exponents_(n) != std::floor(exponents_(n))) return false;
    return true;
  }

 private:
  VectorXd lambdas_;
  VectorXd exponents_;
};

/// Inverse gain sum_n lambda_n * r^(a_n) at range r > 0.
/// Exactly 1 at r = 1 because pow(1, a) == 1 and the weights sum to 1.
inline double inverse_gain(const GainSpec& g, double r) {
  if (!(r > 0.0)) throw DomainError("inverse_gain: range must be positive");
  double acc = 0.0;
  for (Eigen::Index n = 0; n < g.terms(); ++n)
    acc += g.lambdas()(n) * std::pow(r, g.exponents()(n));
  return acc;
}

/// Sensor-network geometry. Nodes carry integer ids (the line constructors
/// use the conventional ids: collector 0, sensors 1..N); positions live in
/// R^d, d in {1,2,3}.
class Network {
 public:
  Network(MatrixXd positions, std::vector<int> ids, std::set<int> collectors)
      : positions_(std::move(positions)),
        ids_(std::move(ids)),
        collectors_(std::move(collectors)) {
    if (positions_.rows() == 0) throw DomainError("Network: at least one node required");
    if (static_cast<std::size_t>(positions_.rows()) != ids_.size())
      throw DomainError("Network: ids and positions must align");
    if (positions_.cols() < 1 || positions_.cols() > 3)
      throw DomainError("Network: dimension must be 1, 2 or 3");
    for (std::size_t r = 0; r < ids_.size(); ++r) {
      if (!row_.emplace(ids_[r], static_cast<int>(r)).second)
        throw DomainError("Network: duplicate node id " + std::to_string(ids_[r]));
    }
    for (int c : collectors_)
      if (!row_.count(c)) throw DomainError("Network: collector id " + std::to_string(c) + " unknown");
    for (Eigen::Index a = 0; a < positions_.rows(); ++a)
      for (Eigen::Index b = a + 1; b < positions_.rows(); ++b)
        if ((positions_.row(a) - positions_.row(b)).norm() == 0.0)
          throw DomainError("Network: node positions must be distinct");
  }

  int size() const { return static_cast<int>(positions_.rows()); }
  int dim() const { return static_cast<int>(positions_.cols()); }
  const std::vector<int>& ids() const { return ids_; }
  const std::set<int>& collectors() const { return collectors_; }

  bool has(int id) const { return row_.count(id) != 0; }
  bool is_collector(int id) const { return collectors_.count(id) != 0; }

  /// Sensor ids (non-collectors), ascending.
  std::vector<int> sensors() const {
    std::vector<int> s;
    for (int id : ids_)
      if (!is_collector(id)) s.push_back(id);
    std::sort(s.begin(), s.end());
    return s;
  }

  Eigen::RowVectorXd position(int id) const { return positions_.row(row_of(id)); }
  const MatrixXd& positions() const { return positions_; }

  double distance(int i, int j) const {
    return (positions_.row(row_of(i)) - positions_.row(row_of(j))).norm();
  }

  /// Same nodes with every coordinate multiplied by lambda > 0.
  Network rescaled(double lambda) const {
    if (!(lambda > 0.0)) throw DomainError("Network::rescaled: factor must be positive");
    return Network(positions_ * lambda, ids_, collectors_);
  }

 private:
  int row_of(int id) const {
    auto it = row_.find(id);
    if (it == row_.end()) throw DomainError("Network: unknown node id " + std::to_string(id));
    return it->second;
  }

  MatrixXd positions_;
  std::vector<int> ids_;
  std::set<int> collectors_;
  std::unordered_map<int, int> row_;
};

/// Regular line network: sensors 1..N at coordinates 1..N, plus (for the
/// collector variant) a data collector with id 0 at the origin.
inline Network build_line_network(int n, bool with_collector) {
  if (n < 1) throw DomainError("build_line_network: need at least one sensor");
  const int total = with_collector ? n + 1 : n;
  MatrixXd pos(total, 1);
  std::vector<int> ids(total);
  const int first = with_collector ? 0 : 1;
  for (int k = 0; k < total; ++k) {
    ids[k] = first + k;
    pos(k, 0) = static_cast<double>(first + k);
  }
  std::set<int> collectors;
  if (with_collector) collectors.insert(0);
  return Network(std::move(pos), std::move(ids), std::move(collectors));
}

/// Inverse gain between two distinct nodes, from the Euclidean distance.
inline double pair_inverse_gain(const Network& net, const GainSpec& g, int i, int j) {
  if (i == j) throw DomainError("pair_inverse_gain: self-link " + std::to_string(i));
  return inverse_gain(g, net.distance(i, j));
}

/// Pairwise inverse gains keyed by node id; the scalar-generic carrier the
/// energy/LP code operates on, so double and exact paths share one shape.
template <typename Scalar>
struct PairGain {
  std::vector<int> ids;                       // ascending
  MatrixX<Scalar> inv;                        // inv(row(i), row(j)); diagonal unused (0)
  std::unordered_map<int, int> row;

  const Scalar& operator()(int i, int j) const {
    auto a = row.find(i), b = row.find(j);
    if (a == row.end() || b == row.end())
      throw DomainError("PairGain: unknown node id");
    if (i == j) throw DomainError("PairGain: self-link " + std::to_string(i));
    return inv(a->second, b->second);
  }
  bool has(int id) const { return row.count(id) != 0; }
};

/// Pairwise inverse gains of a network in double precision.
inline PairGain<double> pairwise_inverse_gains(const Network& net, const GainSpec& g) {
  PairGain<double> pg;
  pg.ids = net.ids();
  std::sort(pg.ids.begin(), pg.ids.end());
  const int n = static_cast<int>(pg.ids.size());
  pg.inv.setZero(n, n);
  for (int a = 0; a < n; ++a) pg.row.emplace(pg.ids[a], a);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) pg.inv(a, b) = inverse_gain(g, net.distance(pg.ids[a], pg.ids[b]));
  return pg;
}

namespace detail {
inline Rational exact_integer_pow(long long base, long long exp) {
  Rational acc(1);
  for (long long k = 0; k < exp; ++k) acc *= base;
  return acc;
}
}  // namespace detail

/// Exact inverse gain at integer range r; requires integer exponents.
inline Rational inverse_gain_exact(const GainSpec& g, long long r) {
  if (r <= 0) throw DomainError("inverse_gain_exact: range must be positive");
  if (!g.integer_exponents())
    throw DomainError("inverse_gain_exact: exponents must be integral for exact arithmetic");
  Rational acc(0);
  for (Eigen::Index n = 0; n < g.terms(); ++n)
    acc += to_rational(g.lambdas()(n)) * detail::exact_integer_pow(r, static_cast<long long>(g.exponents()(n)));
  return acc;
}

/// Exact pairwise inverse gains; every pairwise distance must be an integer
/// (line networks with integer spacing), every exponent integral.
inline PairGain<Rational> pairwise_inverse_gains_exact(const Network& net, const GainSpec& g) {
  PairGain<Rational> pg;
  pg.ids = net.ids();
  std::sort(pg.ids.begin(), pg.ids.end());
  const int n = static_cast<int>(pg.ids.size());
  pg.inv.setZero(n, n);
  for (int a = 0; a < n; ++a) pg.row.emplace(pg.ids[a], a);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double d = net.distance(pg.ids[a], pg.ids[b]);
      const double rd = std::round(d);
      if (d != rd)
        throw DomainError("pairwise_inverse_gains_exact: non-integer distance " + std::to_string(d));
      pg.inv(a, b) = inverse_gain_exact(g, static_cast<long long>(rd));
    }
  return pg;
}

/// Inverse gains at ranges 1..N of a unit-spaced line, as a table indexed
/// by r-1. Generic over the scalar so closed forms run in either mode.
template <typename Scalar>
VectorX<Scalar> line_inverse_gains(const GainSpec& g, int n);

template <>
inline VectorX<double> line_inverse_gains<double>(const GainSpec& g, int n) {
  if (n < 1) throw DomainError("line_inverse_gains: need n >= 1");
  VectorX<double> v(n);
  for (int r = 1; r <= n; ++r) v(r - 1) = inverse_gain(g, static_cast<double>(r));
  return v;
}

template <>
inline VectorX<Rational> line_inverse_gains<Rational>(const GainSpec& g, int n) {
  if (n < 1) throw DomainError("line_inverse_gains: need n >= 1");
  VectorX<Rational> v(n);
  for (int r = 1; r <= n; ++r) v(r - 1) = inverse_gain_exact(g, r);
  return v;
}

}  // namespace lifemax
