#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cograsp/error.hpp"

namespace cograsp::detail {

// Dense tableau simplex for small LPs:
//   minimize c.z  subject to  M z = b, z >= 0
// Rows must arrive with b >= 0 (callers negate rows as needed). Bland's rule
// throughout, so the solver cannot cycle.
class SimplexLp {
 public:
  SimplexLp(int num_vars, int num_rows) : n_(num_vars), m_(num_rows) {
    rows_.assign(static_cast<size_t>(m_), std::vector<double>(static_cast<size_t>(n_) + 1, 0.0));
  }

  double& coeff(int row, int var) { return rows_[row][var]; }
  double& rhs(int row) { return rows_[row][n_]; }

  // Minimizes objective c (size num_vars) via the two-phase method. Returns
  // the optimal value. Throws ValidationError if infeasible, Error if
  // unbounded or stuck.
  double minimize(const std::vector<double>& c) {
    // Phase 1: artificial variable per row, start basis = artificials.
    total_ = n_ + m_;
    init_tableau();
    for (int r = 0; r < m_; ++r) {
      tableau_[r][n_ + r] = 1.0;
      basis_[r] = n_ + r;
    }
    // Phase-1 objective: sum of artificials, expressed in the current basis.
    auto& obj = tableau_[m_];
    for (int j = 0; j <= total_; ++j) {
      double s = 0.0;
      for (int r = 0; r < m_; ++r) s += tableau_[r][j];
      obj[j] = (j >= n_ && j < total_) ? s - 1.0 : s;
    }
    pivot_until_optimal(total_);
    if (obj[total_] > 1e-7) throw ValidationError("SimplexLp: infeasible system");

    // Drive leftover artificials out of the basis.
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(tableau_[r][j]) > 1e-9) {
          enter = j;
          break;
        }
      if (enter >= 0) pivot(r, enter);
      // A row with no eligible column is redundant; its artificial stays at
      // zero and never re-enters because phase 2 bars artificial columns.
    }
    return run_phase2(c);
  }

  // Minimizes starting from a caller-supplied feasible basis: start_basis[r]
  // is the variable basic in row r, whose column must be 1 there and 0 in
  // every other row. Skips phase 1 and allocates no artificial columns.
  double minimize(const std::vector<double>& c, const std::vector<int>& start_basis) {
    total_ = n_;
    init_tableau();
    for (int r = 0; r < m_; ++r) {
      if (rows_[r][n_] < 0.0) throw Error("SimplexLp: start basis infeasible");
      basis_[r] = start_basis[r];
    }
    for (int r = 0; r < m_; ++r) {
      const int col = basis_[r];
      if (col < 0 || col >= n_) throw Error("SimplexLp: start basis out of range");
      for (int r2 = 0; r2 < m_; ++r2) {
        const double want = r2 == r ? 1.0 : 0.0;
        if (std::abs(rows_[r2][col] - want) > 1e-12)
          throw Error("SimplexLp: start basis is not an identity basis");
      }
    }
    return run_phase2(c);
  }

 private:
  void init_tableau() {
    tableau_.assign(static_cast<size_t>(m_) + 1,
                    std::vector<double>(static_cast<size_t>(total_) + 1, 0.0));
    basis_.resize(static_cast<size_t>(m_));
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < n_; ++j) tableau_[r][j] = rows_[r][j];
      tableau_[r][total_] = rows_[r][n_];
    }
  }

  // Real objective expressed in terms of the current basis, then optimize
  // over the real columns only (artificials, if any, stay barred).
  double run_phase2(const std::vector<double>& c) {
    auto& obj = tableau_[m_];
    for (int j = 0; j <= total_; ++j) obj[j] = 0.0;
    for (int j = 0; j < n_; ++j) obj[j] = -c[j];
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) continue;
      const double coeff_b = obj[basis_[r]];
      if (coeff_b == 0.0) continue;
      for (int j = 0; j <= total_; ++j) obj[j] -= coeff_b * tableau_[r][j];
    }
    pivot_until_optimal(n_);
    double value = 0.0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) value += c[basis_[r]] * tableau_[r][total_];
    return value;
  }

  void pivot_until_optimal(int allowed_cols) {
    const size_t cap = 8192;
    for (size_t iter = 0; iter < cap; ++iter) {
      auto& obj = tableau_[m_];
      int enter = -1;
      int leave = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (obj[j] <= 1e-11) continue;  // Bland: first improving column
        leave = ratio_test(j);
        if (leave >= 0) {
          enter = j;
          break;
        }
        // No usable pivot entry. A genuine ray comes with a solidly improving
        // reduced cost; at noise level the column is merely numerically
        // exhausted, so pass over it instead of reporting unboundedness.
        if (obj[j] > 1e-7) throw Error("SimplexLp: unbounded objective");
      }
      if (enter < 0) return;
      pivot(leave, enter);
    }
    throw Error("SimplexLp: pivot limit exceeded");
  }

  // Bland-tied minimum-ratio row for an entering column, or -1 when no entry
  // clears the pivot tolerance (rhs stays >= 0, so every ratio is finite).
  int ratio_test(int col) const {
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double a = tableau_[r][col];
      if (a <= 1e-11) continue;
      const double ratio = tableau_[r][total_] / a;
      if (leave < 0 || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis_[r] < basis_[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    return leave;
  }

  void pivot(int row, int col) {
    auto& prow = tableau_[row];
    const double inv = 1.0 / prow[col];
    for (int j = 0; j <= total_; ++j) prow[j] *= inv;
    prow[col] = 1.0;
    for (int r = 0; r <= m_; ++r) {
      if (r == row) continue;
      const double factor = tableau_[r][col];
      if (factor == 0.0) continue;
      for (int j = 0; j <= total_; ++j) tableau_[r][j] -= factor * prow[j];
      tableau_[r][col] = 0.0;
    }
    basis_[row] = col;
  }

  int n_;
  int m_;
  int total_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<double>> tableau_;
  std::vector<int> basis_;
};

}  // namespace cograsp::detail
