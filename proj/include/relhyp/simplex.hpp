#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace relhyp {

template <class Scalar>
struct SimplexTraits {
  static Scalar eps() { return Scalar(1e-9); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

template <class Scalar>
struct LpSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::IterationLimit;
  Vector x;
  Scalar objective = Scalar(0);
  /// Optimal: dual values y of the equality rows.
  /// Infeasible: Farkas certificate, y^T A <= 0 componentwise and y^T b > 0.
  Vector y;
};

/// Dense two-phase tableau simplex with Bland's rule for
///   minimize c^T x  subject to  A x = b,  x >= 0.
/// Scalar may be double or an exact rational type; SimplexTraits<Scalar>::eps
/// is the zero tolerance.
template <class Scalar>
LpSolution<Scalar> simplex_solve(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                                 std::size_t max_iterations = 100'000) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Scalar eps = SimplexTraits<Scalar>::eps();
  const Eigen::Index m = A.rows(), n = A.cols();

  // Columns: n structural, m artificial, then the right-hand side.
  Matrix T = Matrix::Zero(m, n + m + 1);
  std::vector<Scalar> flip(m, Scalar(1));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < Scalar(0)) flip[i] = Scalar(-1);
    T.row(i).head(n) = A.row(i) * flip[i];
    T(i, n + i) = Scalar(1);
    T(i, n + m) = b(i) * flip[i];
  }
  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;
  std::vector<bool> active(n + m, true);  // artificials are retired after phase 1

  std::size_t iterations = 0;
  auto pivot = [&](Eigen::Index r, Eigen::Index col) {
    const Scalar pv = T(r, col);
    T.row(r) /= pv;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == r) continue;
      const Scalar f = T(i, col);
      if (f != Scalar(0)) T.row(i) -= f * T.row(r);
    }
    basis[r] = col;
  };

  // Runs the simplex for cost vector `cost` over active columns.
  auto optimize = [&](const Vector& cost) -> LpStatus {
    for (;;) {
      if (++iterations > max_iterations) return LpStatus::IterationLimit;
      Vector cb(m);
      for (Eigen::Index i = 0; i < m; ++i) cb(i) = cost(basis[i]);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n + m; ++j) {
        if (!active[j]) continue;
        Scalar reduced = cost(j);
        for (Eigen::Index i = 0; i < m; ++i)
          if (T(i, j) != Scalar(0)) reduced -= cb(i) * T(i, j);
        if (reduced < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      Eigen::Index leave = -1;
      Scalar best_ratio(0);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T(i, enter) <= eps) continue;
        Scalar ratio = T(i, n + m) / T(i, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  };

  // Dual values for `cost`: y = c_B^T B^{-1}, with B^{-1} read from the
  // artificial block of the tableau; `flip` undoes the row sign changes.
  auto duals = [&](const Vector& cost) {
    Vector y = Vector::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index k = 0; k < m; ++k) y(k) += cost(basis[i]) * T(i, n + k);
    for (Eigen::Index k = 0; k < m; ++k) y(k) *= flip[k];
    return y;
  };

  LpSolution<Scalar> out;
  Vector phase1 = Vector::Zero(n + m);
  for (Eigen::Index i = 0; i < m; ++i) phase1(n + i) = Scalar(1);
  out.status = optimize(phase1);
  if (out.status != LpStatus::Optimal) return out;
  Scalar infeasibility(0);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] >= n) infeasibility += T(i, n + m);
  if (infeasibility > eps) {
    out.status = LpStatus::Infeasible;
    out.y = duals(phase1);
    return out;
  }

  // Drive remaining (zero-level) artificials out of the basis; rows where
  // that is impossible are redundant and keep a harmless artificial.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar v = T(i, j);
      if (v > eps || v < -eps) {
        pivot(i, j);
        break;
      }
    }
  }
  for (Eigen::Index j = n; j < n + m; ++j) active[j] = false;

  Vector phase2 = Vector::Zero(n + m);
  phase2.head(n) = c;
  out.status = optimize(phase2);
  if (out.status != LpStatus::Optimal) return out;
  out.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[i] < n) out.x(basis[i]) = T(i, n + m);
  out.objective = c.dot(out.x);
  out.y = duals(phase2);
  return out;
}

}  // namespace relhyp
