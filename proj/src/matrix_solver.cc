// Copyright 2026 The cpayoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cpayoff/matrix_solver.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpayoff/error.h"

namespace cpayoff {
namespace {

// Dense tableau for
//   max sum_j w_j  s.t.  B w + s = 1,  w, s >= 0
// where B = A - min(A) + 1 has entries >= 1. Columns 0..cols-1 are w,
// columns cols..cols+rows-1 the slacks.
template <typename T>
class Tableau {
 public:
  Tableau(const std::vector<std::vector<T>>& shifted, T eps)
      : rows_(static_cast<int>(shifted.size())),
        cols_(static_cast<int>(shifted[0].size())),
        width_(cols_ + rows_),
        eps_(eps),
        a_(rows_, std::vector<T>(width_ + 1, T(0))),
        reduced_(width_, T(0)),
        basis_(rows_) {
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) a_[r][c] = shifted[r][c];
      a_[r][cols_ + r] = T(1);
      a_[r][width_] = T(1);
      basis_[r] = cols_ + r;
    }
    for (int c = 0; c < cols_; ++c) reduced_[c] = T(1);
  }

  // Brings `column` into the basis via the ratio test; feasibility is kept.
  bool PivotIn(int column) {
    if (std::find(basis_.begin(), basis_.end(), column) != basis_.end()) {
      return false;
    }
    int row = RatioTest(column);
    if (row < 0) return false;
    Pivot(row, column);
    return true;
  }

  // Bland's rule to optimality. Returns false on iteration overflow.
  bool Optimize(int max_iterations) {
    for (int it = 0; it < max_iterations; ++it) {
      int entering = -1;
      for (int c = 0; c < width_; ++c) {
        if (reduced_[c] > eps_) {
          entering = c;
          break;
        }
      }
      if (entering < 0) return true;
      int row = RatioTest(entering);
      if (row < 0) return false;  // unbounded: impossible for B >= 1
      Pivot(row, entering);
    }
    return false;
  }

  // Primal w and dual u, both unnormalized.
  std::vector<T> Primal() const {
    std::vector<T> w(cols_, T(0));
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) w[basis_[r]] = a_[r][width_];
    }
    return w;
  }
  std::vector<T> Dual() const {
    std::vector<T> u(rows_);
    for (int r = 0; r < rows_; ++r) u[r] = -reduced_[cols_ + r];
    return u;
  }
  const std::vector<int>& basis() const { return basis_; }
  int width() const { return width_; }

 private:
  int RatioTest(int column) const {
    int best = -1;
    T best_ratio{};
    for (int r = 0; r < rows_; ++r) {
      if (!(a_[r][column] > eps_)) continue;
      T ratio = a_[r][width_] / a_[r][column];
      if (best < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[r] < basis_[best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void Pivot(int row, int column) {
    const T p = a_[row][column];
    for (T& v : a_[row]) v /= p;
    for (int r = 0; r < rows_; ++r) {
      if (r == row) continue;
      const T f = a_[r][column];
      if (f == T(0)) continue;
      for (int c = 0; c <= width_; ++c) a_[r][c] -= f * a_[row][c];
      a_[r][column] = T(0);
    }
    const T f = reduced_[column];
    for (int c = 0; c < width_; ++c) reduced_[c] -= f * a_[row][c];
    reduced_[column] = T(0);
    basis_[row] = column;
  }

  int rows_, cols_, width_;
  T eps_;
  std::vector<std::vector<T>> a_;
  std::vector<T> reduced_;
  std::vector<int> basis_;
};

template <typename T>
BasicMatrixGameSolution<T> Solve(const std::vector<std::vector<T>>& payoff,
                                 T eps, const std::vector<int>* hint) {
  if (payoff.empty() || payoff[0].empty()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix game must be nonempty");
  }
  const int rows = static_cast<int>(payoff.size());
  const int cols = static_cast<int>(payoff[0].size());
  T lowest = payoff[0][0];
  for (const auto& row : payoff) {
    if (static_cast<int>(row.size()) != cols) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged payoff matrix");
    }
    for (const T& v : row) lowest = std::min(lowest, v);
  }
  const T shift = T(1) - lowest;
  std::vector<std::vector<T>> shifted = payoff;
  for (auto& row : shifted) {
    for (T& v : row) v += shift;
  }

  Tableau<T> tableau(shifted, eps);
  if (hint != nullptr) {
    for (int column : *hint) {
      if (column >= 0 && column < tableau.width()) tableau.PivotIn(column);
    }
  }
  if (!tableau.Optimize(64 * (rows + cols) + 1000)) {
    throw Error(ErrorCode::kNumericalFailure,
                "simplex did not terminate on a " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " matrix game");
  }

  std::vector<T> w = tableau.Primal();
  std::vector<T> u = tableau.Dual();
  BasicMatrixGameSolution<T> solution;
  auto normalize = [](std::vector<T>& p) {
    T total(0);
    for (T& v : p) {
      if (!(v > T(0))) v = T(0);
      total += v;
    }
    if (!(total > T(0))) {
      throw Error(ErrorCode::kNumericalFailure, "degenerate LP solution");
    }
    for (T& v : p) v /= total;
  };
  normalize(w);
  normalize(u);
  solution.x_opt = std::move(u);
  solution.y_opt = std::move(w);

  T best_row{}, worst_col{};
  for (int r = 0; r < rows; ++r) {
    T s(0);
    for (int c = 0; c < cols; ++c) s += payoff[r][c] * solution.y_opt[c];
    if (r == 0 || s > best_row) best_row = s;
  }
  for (int c = 0; c < cols; ++c) {
    T s(0);
    for (int r = 0; r < rows; ++r) s += solution.x_opt[r] * payoff[r][c];
    if (c == 0 || s < worst_col) worst_col = s;
  }
  solution.duality_gap = std::max<T>(T(0), T(best_row - worst_col));
  solution.value = (best_row + worst_col) / T(2);
  solution.basis = tableau.basis();
  return solution;
}

}  // namespace

MatrixGameSolution SolveMatrixGame(const Eigen::MatrixXd& payoff,
                                   const std::vector<int>* basis_hint) {
  if (payoff.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "matrix game must be nonempty");
  }
  if (!payoff.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix game has non-finite entries");
  }
  std::vector<std::vector<double>> rows(payoff.rows(),
                                        std::vector<double>(payoff.cols()));
  for (int r = 0; r < payoff.rows(); ++r) {
    for (int c = 0; c < payoff.cols(); ++c) rows[r][c] = payoff(r, c);
  }
  const double scale = std::max(1.0, payoff.cwiseAbs().maxCoeff());
  MatrixGameSolution solution = Solve<double>(rows, 1e-13 * scale, basis_hint);
  if (solution.duality_gap > kMatrixGameTolerance * scale) {
    throw Error(ErrorCode::kNumericalFailure,
                "duality gap " + std::to_string(solution.duality_gap) +
                    " above tolerance");
  }
  return solution;
}

ExactMatrixGameSolution SolveMatrixGameExact(const RationalMatrix& payoff) {
  ExactMatrixGameSolution solution = Solve<Rational>(payoff, Rational(0), nullptr);
  if (solution.duality_gap != 0) {
    throw Error(ErrorCode::kNumericalFailure, "exact solve left a duality gap");
  }
  return solution;
}

}  // namespace cpayoff
