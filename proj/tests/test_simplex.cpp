#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "lifemax/simplex.hpp"

using namespace lifemax;

namespace {

template <typename Scalar>
LinearProgram<Scalar> make_lp(int rows, int cols) {
  LinearProgram<Scalar> lp;
  lp.a.setZero(rows, cols);
  lp.b.setZero(rows);
  lp.c.setZero(cols);
  lp.rows.assign(rows, RowType::eq);
  return lp;
}

}  // namespace

TEST_CASE("forced assignment with duals") {
  auto lp = make_lp<double>(2, 2);
  lp.a << 1, 0, 0, 1;
  lp.b << 1, 1;
  lp.c << 2, 3;
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.x(0) == doctest::Approx(1.0));
  CHECK(res.x(1) == doctest::Approx(1.0));
  CHECK(res.objective == doctest::Approx(5.0));
  CHECK(res.dual(0) == doctest::Approx(2.0));
  CHECK(res.dual(1) == doctest::Approx(3.0));
  CHECK(certify_optimal(lp, res).worst() < 1e-9);
}

TEST_CASE("inequality with nonpositive dual") {
  auto lp = make_lp<double>(2, 2);
  lp.a << 1, 1, 1, -1;
  lp.b << 4, 0;
  lp.c << -1, -1;
  lp.rows = {RowType::le, RowType::eq};
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective == doctest::Approx(-4.0));
  CHECK(res.x(0) + res.x(1) == doctest::Approx(4.0));
  CHECK(res.dual(0) <= 1e-12);
  CHECK(certify_optimal(lp, res).worst() < 1e-9);
}

TEST_CASE("degenerate objective resolves deterministically") {
  auto lp = make_lp<double>(1, 2);
  lp.a << 1, 1;
  lp.b << 1;
  lp.c << 1, 1;
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::optimal);
  // Bland's rule admits the lowest column first
  CHECK(res.x(0) == doctest::Approx(1.0));
  CHECK(res.x(1) == 0.0);

  auto again = solve_simplex(lp);
  CHECK(again.x == res.x);
  CHECK(again.iterations == res.iterations);
}

TEST_CASE("empty and trivial programs") {
  auto lp = make_lp<double>(0, 0);
  auto res = solve_simplex(lp);
  CHECK(res.status == LpStatus::optimal);
  CHECK(res.objective == 0.0);

  auto free_var = make_lp<double>(0, 1);
  free_var.c << 1;
  res = solve_simplex(free_var);
  CHECK(res.status == LpStatus::optimal);
  CHECK(res.x(0) == 0.0);

  free_var.c << -1;
  CHECK(solve_simplex(free_var).status == LpStatus::unbounded);
}

TEST_CASE("unbounded descent") {
  auto lp = make_lp<double>(1, 2);
  lp.a << 1, -1;
  lp.b << 1;
  lp.c << -1, 0;
  lp.rows = {RowType::le};
  auto res = solve_simplex(lp);
  CHECK(res.status == LpStatus::unbounded);
}

TEST_CASE("infeasible equalities yield a Farkas certificate") {
  auto lp = make_lp<double>(2, 2);
  lp.a << 1, 1, 1, 1;
  lp.b << 2, 5;
  lp.c << 1, 1;
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::infeasible);
  REQUIRE(res.farkas.size() == 2);
  const VectorXd aty = lp.a.transpose() * res.farkas;
  for (int j = 0; j < 2; ++j) CHECK(aty(j) <= 1e-9);
  CHECK(res.farkas.dot(lp.b) > 1e-9);
}

TEST_CASE("infeasible negative bound") {
  auto lp = make_lp<double>(1, 1);
  lp.a << 1;
  lp.b << -3;
  lp.c << 1;
  lp.rows = {RowType::le};  // x <= -3 with x >= 0
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::infeasible);
  CHECK(res.farkas(0) <= 0.0);       // multiplier sign on a <= row
  CHECK(res.farkas.dot(lp.b) > 0.0);
  CHECK((lp.a.transpose() * res.farkas)(0) <= 1e-9);
}

TEST_CASE("redundant rows are tolerated") {
  auto lp = make_lp<double>(3, 2);
  lp.a << 1, 1, 1, 1, 2, 2;  // second and third rows repeat the first
  lp.b << 2, 2, 4;
  lp.c << 1, 0;
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.objective == doctest::Approx(0.0));
  CHECK(res.x(1) == doctest::Approx(2.0));
  CHECK(res.dual.size() == 3);
  CHECK(certify_optimal(lp, res).worst() < 1e-9);
}

TEST_CASE("exact arithmetic") {
  auto lp = make_lp<Rational>(2, 2);
  lp.a << Rational(3), Rational(0), Rational(0), Rational(5);
  lp.b << Rational(1), Rational(1);
  lp.c << Rational(1), Rational(1);
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::optimal);
  CHECK(res.x(0) == Rational(1) / 3);
  CHECK(res.x(1) == Rational(1) / 5);
  CHECK(res.objective == Rational(8) / 15);
  CHECK(res.dual(0) == Rational(1) / 3);
  CHECK(res.dual(1) == Rational(1) / 5);
  auto cert = certify_optimal(lp, res);
  CHECK(cert.worst() == Rational(0));
}

TEST_CASE("input validation") {
  auto lp = make_lp<double>(2, 2);
  lp.b.resize(1);
  CHECK_THROWS_AS(solve_simplex(lp), DomainError);

  lp = make_lp<double>(1, 2);
  lp.c.resize(3);
  CHECK_THROWS_AS(solve_simplex(lp), DomainError);

  lp = make_lp<double>(1, 1);
  lp.a(0, 0) = std::nan("");
  CHECK_THROWS_AS(solve_simplex(lp), DomainError);
}

TEST_CASE("iteration cap") {
  auto lp = make_lp<double>(2, 2);
  lp.a << 1, 0, 0, 1;
  lp.b << 1, 1;
  lp.c << 2, 3;
  CHECK_THROWS_AS(solve_simplex(lp, 1), ResourceLimitError);
}

TEST_CASE("certification rejects non optimal results") {
  auto lp = make_lp<double>(1, 1);
  lp.a << 1;
  lp.b << -1;
  lp.rows = {RowType::le};
  auto res = solve_simplex(lp);
  REQUIRE(res.status == LpStatus::infeasible);
  CHECK_THROWS_AS(certify_optimal(lp, res), DomainError);
}
