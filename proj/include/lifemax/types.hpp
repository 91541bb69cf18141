#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace lifemax {

/// Exact scalar used by the rational solve paths. GMP-backed so simplex
/// pivoting cannot overflow no matter how the determinants grow.
using Rational = boost::multiprecision::mpq_rational;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::MatrixXd;
using Eigen::VectorXd;

template <typename Scalar>
inline double to_double(const Scalar& x) {
  return static_cast<double>(x);
}
inline double to_double(double x) { return x; }

/// Exact conversion; a double is a binary fraction, so nothing is lost.
inline Rational to_rational(double x) { return Rational(x); }

/// floor(a/b) for nonnegative rationals.
inline long long rational_floor_div(const Rational& a, const Rational& b) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  Rational q = a / b;
  return static_cast<long long>(numerator(q) / denominator(q));
}

inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace lifemax
