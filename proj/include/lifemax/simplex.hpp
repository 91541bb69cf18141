#pragma once

#include <algorithm>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "lifemax/errors.hpp"
#include "lifemax/types.hpp"

namespace lifemax {

enum class RowType { eq, le };
enum class LpStatus { optimal, infeasible, unbounded };

/// min c'x  subject to  A x = b or A x <= b rowwise,  x >= 0.
template <typename Scalar>
struct LinearProgram {
  MatrixX<Scalar> a;
  VectorX<Scalar> b;
  VectorX<Scalar> c;
  std::vector<RowType> rows;
};

/// `dual` is filled for optimal results, one multiplier per row,
/// nonpositive on <= rows. `farkas` is filled for infeasible results and
/// certifies the verdict: farkas'A <= 0 columnwise, farkas(i) <= 0 on
/// <= rows, yet farkas'b > 0, which no feasible x >= 0 could allow.
template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::optimal;
  VectorX<Scalar> x;
  Scalar objective{};
  VectorX<Scalar> dual;
  VectorX<Scalar> farkas;
  long iterations = 0;
};

namespace detail {

/// Cap on end-of-phase tableau rebuilds; certification catches the rest.
inline constexpr int kRefreshRounds = 8;

/// Pivots between periodic tableau rebuilds inside a phase.
inline constexpr long kRefreshInterval = 50;

template <typename Scalar>
Scalar lp_eps() {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return Scalar(0);
  else
    return Scalar(1e-9);
}

template <typename Scalar>
Scalar abs_val(const Scalar& v) {
  return v < Scalar(0) ? Scalar(-v) : v;
}

/// Dense two-phase primal simplex on an explicit tableau. Bland's rule
/// (lowest eligible column enters, ratio ties go to the lowest basic
/// index) rules out cycling, so the iteration cap only catches bugs.
/// Every row gets an artificial variable; phase 1 drives their sum to
/// zero, phase 2 bars them. Rows whose artificial cannot be pivoted out
/// are linearly dependent and get deleted. Duals are read off the
/// artificial columns, whose reduced costs stay maintained throughout.
template <typename Scalar>
class SimplexTableau {
 public:
  SimplexTableau(const LinearProgram<Scalar>& lp, long max_iterations)
      : lp_(lp), max_iter_(max_iterations) {
    validate();
    build();
  }

  LpResult<Scalar> solve() {
    run(1);
    Scalar infeas(0);
    for (int i = 0; i < m(); ++i)
      if (basis_[i] >= art0_) infeas += rhs_(i);
    if (infeas > feas_tol_) return infeasible_result();
    refresh();
    cleanup_artificials();
    load_costs(2);
    // Pivot roundoff can hide a negative reduced cost and stall phase 2
    // at a degenerate vertex, so after each converged pass the tableau is
    // rebuilt from the original data and the pass repeats until a fresh
    // one moves nothing. Exact arithmetic never drifts and runs once.
    long settled = -1;
    for (int round = 0;; ++round) {
      if (!run(2)) {
        LpResult<Scalar> res;
        res.status = LpStatus::unbounded;
        res.iterations = iters_;
        return res;
      }
      if (std::is_same_v<Scalar, Rational> || iters_ == settled) break;
      if (round == kRefreshRounds || !refresh()) break;
      load_costs(2);
      settled = iters_;
    }
    return optimal_result();
  }

 private:
  int m() const { return static_cast<int>(t_.rows()); }

  void validate() const {
    if (lp_.a.rows() != lp_.b.size() ||
        lp_.rows.size() != static_cast<std::size_t>(lp_.a.rows()))
      throw DomainError("solve_simplex: row count mismatch");
    if (lp_.a.cols() != lp_.c.size())
      throw DomainError("solve_simplex: column count mismatch");
    if constexpr (!std::is_same_v<Scalar, Rational>) {
      if (!lp_.a.allFinite() || !lp_.b.allFinite() || !lp_.c.allFinite())
        throw DomainError("solve_simplex: coefficients must be finite");
    }
  }

  // Standard form: slack on every <= row, then rows with negative rhs
  // negated, then one artificial unit column per row as initial basis.
  void build() {
    const int m0 = static_cast<int>(lp_.b.size());
    n_ = static_cast<int>(lp_.c.size());
    int n_slack = 0;
    for (RowType rt : lp_.rows)
      if (rt == RowType::le) ++n_slack;
    art0_ = n_ + n_slack;
    total_ = art0_ + m0;
    t_.resize(m0, total_);
    t_.setZero();
    rhs_.resize(m0);
    basis_.assign(m0, -1);
    negated_.assign(m0, false);
    slack_col_.assign(m0, -1);
    art_col_.assign(m0, -1);
    int sc = n_;
    Scalar bsum(0);
    orig_rows_.resize(m0);
    for (int i = 0; i < m0; ++i) {
      orig_rows_[i] = i;
      negated_[i] = lp_.b(i) < Scalar(0);
      const Scalar sgn = negated_[i] ? Scalar(-1) : Scalar(1);
      if (n_ > 0) t_.row(i).head(n_) = sgn * lp_.a.row(i);
      rhs_(i) = sgn * lp_.b(i);
      bsum += rhs_(i);
      if (lp_.rows[i] == RowType::le) {
        slack_col_[i] = sc;
        t_(i, sc) = sgn;
        ++sc;
      }
      art_col_[i] = art0_ + i;
      t_(i, art0_ + i) = Scalar(1);
      basis_[i] = art0_ + i;
    }
    feas_tol_ = eps_ * (Scalar(1) + bsum);
    load_costs(1);
  }

  // Reduced costs for the given phase under the current basis. Basic
  // columns are unit vectors, so each subtraction clears exactly one
  // entry and the loop order does not matter.
  void load_costs(int phase) {
    cost_.resize(total_);
    cost_.setZero();
    if (phase == 1) {
      for (int i = 0; i < m(); ++i) cost_(art_col_[i]) = Scalar(1);
    } else if (n_ > 0) {
      cost_.head(n_) = lp_.c;
    }
    for (int i = 0; i < m(); ++i) {
      const Scalar cb = cost_(basis_[i]);
      if (cb != Scalar(0)) cost_ -= cb * t_.row(i).transpose();
    }
  }

  // Returns false when the entering column is unbounded below (phase 2
  // only; the phase 1 objective is bounded by zero).
  bool run(int phase) {
    const int limit = phase == 1 ? total_ : art0_;
    long rescued_at = -1;
    for (;;) {
      if (phase == 1) {
        // Feasibility is reached once the artificial level hits zero.
        // The incrementally updated reduced costs can drift below zero
        // at a degenerate vertex and would chase descent that no exact
        // pivot delivers, so the objective itself decides termination.
        Scalar infeas(0);
        for (int i = 0; i < m(); ++i)
          if (basis_[i] >= art0_) infeas += rhs_(i);
        if (infeas <= feas_tol_) return true;
      }
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (cost_(j) < -eps_) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      Scalar best(0);
      for (int i = 0; i < m(); ++i) {
        if (t_(i, enter) > eps_) {
          const Scalar ratio = rhs_(i) / t_(i, enter);
          if (leave < 0 || ratio < best ||
              (ratio == best && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        // A missing leaving row is only trusted from an undrifted
        // tableau; one rebuild per pivot position re-examines it.
        if (rescued_at != iters_ && refresh()) {
          rescued_at = iters_;
          load_costs(phase);
          continue;
        }
        if (phase == 1) throw InvariantError("solve_simplex: phase 1 unbounded");
        return false;
      }
      pivot(leave, enter);
      if (++iters_ > max_iter_)
        throw ResourceLimitError("solve_simplex: iteration limit " +
                                 std::to_string(max_iter_) + " exceeded");
      if (iters_ % kRefreshInterval == 0 && refresh()) load_costs(phase);
    }
  }

  void pivot(int r, int col) {
    const Scalar p = t_(r, col);
    t_.row(r) /= p;
    rhs_(r) /= p;
    for (int i = 0; i < m(); ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, col);
      if (f != Scalar(0)) {
        t_.row(i) -= f * t_.row(r);
        rhs_(i) -= f * rhs_(r);
        t_(i, col) = Scalar(0);
      }
    }
    const Scalar fc = cost_(col);
    if (fc != Scalar(0)) {
      cost_ -= fc * t_.row(r).transpose();
      cost_(col) = Scalar(0);
    }
    basis_[r] = col;
  }

  // Rebuilds the tableau for the current basis from the original data,
  // discarding accumulated pivot roundoff. Leaves the tableau untouched
  // when the basis matrix is numerically singular or the recomputed
  // basic values stray negative beyond the feasibility slack.
  bool refresh() {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      return true;  // exact pivots never drift
    } else {
      const int r = m();
      if (r == 0) return true;
      MatrixX<Scalar> s(r, total_);
      s.setZero();
      VectorX<Scalar> bs(r);
      for (int i = 0; i < r; ++i) {
        const int oi = orig_rows_[i];
        const Scalar sgn = negated_[oi] ? Scalar(-1) : Scalar(1);
        if (n_ > 0) s.row(i).head(n_) = sgn * lp_.a.row(oi);
        if (slack_col_[oi] >= 0) s(i, slack_col_[oi]) = sgn;
        s(i, art_col_[oi]) = Scalar(1);
        bs(i) = sgn * lp_.b(oi);
      }
      MatrixX<Scalar> bmat(r, r);
      for (int col = 0; col < r; ++col) bmat.col(col) = s.col(basis_[col]);
      const Eigen::FullPivLU<MatrixX<Scalar>> lu(bmat);
      if (!lu.isInvertible()) return false;
      VectorX<Scalar> nrhs = lu.solve(bs);
      for (int i = 0; i < r; ++i) {
        if (nrhs(i) < -feas_tol_) return false;
        if (nrhs(i) < Scalar(0)) nrhs(i) = Scalar(0);
      }
      t_ = lu.solve(s);
      rhs_ = std::move(nrhs);
      return true;
    }
  }

  // A basic artificial after phase 1 sits at level zero. Swap it for any
  // real column with a nonzero tableau entry; if the whole row has none,
  // the constraint is implied by the others and the row goes away.
  void cleanup_artificials() {
    for (;;) {
      int r = -1;
      for (int i = 0; i < m(); ++i)
        if (basis_[i] >= art0_) {
          r = i;
          break;
        }
      if (r < 0) return;
      rhs_(r) = Scalar(0);
      int col = -1;
      for (int j = 0; j < art0_; ++j)
        if (abs_val(t_(r, j)) > eps_) {
          col = j;
          break;
        }
      if (col >= 0)
        pivot(r, col);
      else
        drop_row(r);
    }
  }

  void drop_row(int r) {
    const int mm = m();
    MatrixX<Scalar> t2(mm - 1, total_);
    VectorX<Scalar> r2(mm - 1);
    std::vector<int> b2;
    b2.reserve(mm - 1);
    int k = 0;
    for (int i = 0; i < mm; ++i) {
      if (i == r) continue;
      t2.row(k) = t_.row(i);
      r2(k) = rhs_(i);
      b2.push_back(basis_[i]);
      ++k;
    }
    t_.swap(t2);
    rhs_.swap(r2);
    basis_ = std::move(b2);
    orig_rows_.erase(orig_rows_.begin() + r);
  }

  LpResult<Scalar> optimal_result() const {
    LpResult<Scalar> res;
    res.status = LpStatus::optimal;
    res.x.resize(n_);
    res.x.setZero();
    for (int i = 0; i < m(); ++i)
      if (basis_[i] < n_) res.x(basis_[i]) = rhs_(i) < Scalar(0) ? Scalar(0) : rhs_(i);
    const int m0 = static_cast<int>(lp_.b.size());
    res.dual.resize(m0);
    for (int i = 0; i < m0; ++i) {
      const Scalar y = -cost_(art_col_[i]);
      res.dual(i) = negated_[i] ? Scalar(-y) : y;
    }
    refine(res);
    res.objective = n_ > 0 ? Scalar(lp_.c.dot(res.x)) : Scalar(0);
    res.iterations = iters_;
    return res;
  }

  // The navigated tableau accumulates roundoff, so it only decides which
  // basis is optimal. Primal and dual values are re-derived from a fresh
  // factorization of the original basis columns; a near-singular basis
  // keeps the tableau values and the caller's certification decides.
  void refine(LpResult<Scalar>& res) const {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      (void)res;  // the exact tableau is already the refined answer
    } else {
      const int r = m();
      if (r == 0 || n_ == 0) return;
      MatrixX<Scalar> bmat(r, r);
      VectorX<Scalar> brhs(r), bcost(r);
      for (int col = 0; col < r; ++col) {
        const int j = basis_[col];
        if (j >= art0_) return;
        for (int i = 0; i < r; ++i) {
          const int oi = orig_rows_[i];
          if (j < n_)
            bmat(i, col) = lp_.a(oi, j);
          else
            bmat(i, col) = slack_col_[oi] == j ? Scalar(1) : Scalar(0);
        }
        bcost(col) = j < n_ ? lp_.c(j) : Scalar(0);
      }
      for (int i = 0; i < r; ++i) brhs(i) = lp_.b(orig_rows_[i]);

      const Eigen::FullPivLU<MatrixX<Scalar>> lu(bmat);
      const Eigen::FullPivLU<MatrixX<Scalar>> lut(MatrixX<Scalar>(bmat.transpose()));
      if (!lu.isInvertible() || !lut.isInvertible()) return;
      const VectorX<Scalar> xb = lu.solve(brhs);
      const VectorX<Scalar> y = lut.solve(bcost);

      res.x.setZero();
      for (int col = 0; col < r; ++col)
        if (basis_[col] < n_) res.x(basis_[col]) = xb(col);
      res.dual.setZero();
      for (int i = 0; i < r; ++i) res.dual(orig_rows_[i]) = y(i);
    }
  }

  LpResult<Scalar> infeasible_result() const {
    LpResult<Scalar> res;
    res.status = LpStatus::infeasible;
    const int m0 = static_cast<int>(lp_.b.size());
    res.farkas.resize(m0);
    for (int i = 0; i < m0; ++i) {
      const Scalar y = Scalar(1) - cost_(art_col_[i]);
      res.farkas(i) = negated_[i] ? Scalar(-y) : y;
    }
    res.iterations = iters_;
    return res;
  }

  const LinearProgram<Scalar>& lp_;
  long max_iter_;
  int n_ = 0;
  int art0_ = 0;
  int total_ = 0;
  MatrixX<Scalar> t_;
  VectorX<Scalar> rhs_;
  VectorX<Scalar> cost_;
  std::vector<int> basis_;
  std::vector<int> orig_rows_;  // original row index per remaining row
  std::vector<bool> negated_;
  std::vector<int> slack_col_;
  std::vector<int> art_col_;
  Scalar feas_tol_{};
  const Scalar eps_ = lp_eps<Scalar>();
  long iters_ = 0;
};

}  // namespace detail

template <typename Scalar>
LpResult<Scalar> solve_simplex(const LinearProgram<Scalar>& lp, long max_iterations = 50000) {
  detail::SimplexTableau<Scalar> tab(lp, max_iterations);
  return tab.solve();
}

/// Worst violations of the optimality conditions; all vanish for a
/// correct optimum (identically in exact arithmetic).
template <typename Scalar>
struct LpResiduals {
  Scalar primal{};  // constraint and sign violations of x
  Scalar dual{};    // dual feasibility violations of y
  Scalar slack{};   // complementary slackness products
  Scalar gap{};     // |c'x - b'y|

  Scalar worst() const {
    return std::max(std::max(primal, dual), std::max(slack, gap));
  }
};

template <typename Scalar>
LpResiduals<Scalar> certify_optimal(const LinearProgram<Scalar>& lp,
                                    const LpResult<Scalar>& res) {
  if (res.status != LpStatus::optimal)
    throw DomainError("certify_optimal: result is not optimal");
  LpResiduals<Scalar> out;
  const VectorX<Scalar> ax = lp.a * res.x;
  const VectorX<Scalar> aty = lp.a.transpose() * res.dual;
  using detail::abs_val;
  for (Eigen::Index j = 0; j < res.x.size(); ++j) {
    if (res.x(j) < Scalar(0)) out.primal = std::max(out.primal, Scalar(-res.x(j)));
    const Scalar dviol = aty(j) - lp.c(j);
    if (dviol > Scalar(0)) out.dual = std::max(out.dual, dviol);
    out.slack = std::max(out.slack, abs_val(Scalar(res.x(j) * (lp.c(j) - aty(j)))));
  }
  for (Eigen::Index i = 0; i < lp.b.size(); ++i) {
    const Scalar viol = ax(i) - lp.b(i);
    if (lp.rows[i] == RowType::eq)
      out.primal = std::max(out.primal, abs_val(viol));
    else if (viol > Scalar(0))
      out.primal = std::max(out.primal, viol);
    if (lp.rows[i] == RowType::le && res.dual(i) > Scalar(0))
      out.dual = std::max(out.dual, res.dual(i));
    out.slack = std::max(out.slack, abs_val(Scalar(res.dual(i) * (lp.b(i) - ax(i)))));
  }
  const Scalar cx = res.x.size() > 0 ? Scalar(lp.c.dot(res.x)) : Scalar(0);
  const Scalar by = lp.b.size() > 0 ? Scalar(lp.b.dot(res.dual)) : Scalar(0);
  out.gap = abs_val(Scalar(cx - by));
  return out;
}

}  // namespace lifemax
