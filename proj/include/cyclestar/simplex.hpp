#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclestar/instance.hpp"

namespace cyclestar {

class SimplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// min objective . x  subject to  rows[i] . x = rhs[i],  x >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  Matrix rows;
  std::vector<double> rhs;
};

struct LpResult {
  std::vector<double> x;
  std::vector<double> duals;  // one multiplier per input row
  double value = 0.0;
  int iterations = 0;
};

namespace detail {

// Dense two-phase primal simplex on the full tableau. Columns are the
// structural variables followed by one artificial per row; the artificial
// block starts as the identity and therefore carries B^-1, which is where
// the dual multipliers are read off at the end. Artificial variables never
// re-enter the basis. Dantzig pricing switches to Bland's rule after a stall
// so termination is guaranteed.
class SimplexTableau {
 public:
  SimplexTableau(const LpProblem& lp, double tol)
      : n_(lp.num_vars), m_(static_cast<int>(lp.rows.size())), tol_(tol) {
    if (static_cast<int>(lp.objective.size()) != n_)
      throw std::invalid_argument("simplex: objective size mismatch");
    if (lp.rhs.size() != lp.rows.size())
      throw std::invalid_argument("simplex: rhs size mismatch");
    flip_.assign(m_, 1.0);
    tab_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
    basis_.resize(m_);
    row_ids_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      if (static_cast<int>(lp.rows[i].size()) != n_)
        throw std::invalid_argument("simplex: row size mismatch");
      const double sign = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
      flip_[i] = sign;
      for (int j = 0; j < n_; ++j) tab_[i][j] = sign * lp.rows[i][j];
      tab_[i][n_ + i] = 1.0;
      tab_[i][n_ + m_] = sign * lp.rhs[i];
      basis_[i] = n_ + i;
      row_ids_[i] = i;
    }
  }

  LpResult solve(const std::vector<double>& objective) {
    run_phase1();
    run_phase2(objective);
    return extract(objective);
  }

 private:
  int rhs_col() const { return n_ + m_; }
  int live_rows() const { return static_cast<int>(tab_.size()); }

  void pivot(int row, int col) {
    auto& pr = tab_[row];
    const double inv = 1.0 / pr[col];
    for (double& v : pr) v *= inv;
    pr[col] = 1.0;  // cancel roundoff on the pivot itself
    for (int i = 0; i < live_rows(); ++i) {
      if (i == row) continue;
      const double factor = tab_[i][col];
      if (factor == 0.0) continue;
      auto& ri = tab_[i];
      for (int j = 0; j <= rhs_col(); ++j) ri[j] -= factor * pr[j];
      ri[col] = 0.0;
    }
    const double zfactor = reduced_[col];
    if (zfactor != 0.0) {
      for (int j = 0; j <= rhs_col(); ++j) reduced_[j] -= zfactor * pr[j];
      reduced_[col] = 0.0;
    }
    basis_[row] = col;
  }

  // Lowest-index pricing (Bland) or most-negative pricing (Dantzig);
  // artificial columns are never eligible to enter.
  int entering_column(bool bland) const {
    int best = -1;
    double best_val = -tol_;
    for (int j = 0; j < n_; ++j) {
      const double r = reduced_[j];
      if (r < -tol_) {
        if (bland) return j;
        if (r < best_val) {
          best_val = r;
          best = j;
        }
      }
    }
    return best;
  }

  // Min-ratio row. Near-ties go to the largest pivot element, then the
  // lowest basis index; in Bland mode the lowest basis index wins outright.
  int leaving_row(int col, bool bland) const {
    int best = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < live_rows(); ++i) {
      const double a = tab_[i][col];
      if (a <= tol_) continue;
      const double ratio = tab_[i][rhs_col()] / a;
      if (best < 0) {
        best = i;
        best_ratio = ratio;
        continue;
      }
      const double eps = 1e-12 * (1.0 + std::fabs(best_ratio));
      if (ratio < best_ratio - eps) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + eps) {
        if (bland) {
          if (basis_[i] < basis_[best]) best = i;
        } else {
          const double cur = std::fabs(tab_[best][col]);
          if (a > cur || (a == cur && basis_[i] < basis_[best])) best = i;
        }
      }
    }
    return best;
  }

  void run_pivots(const char* phase) {
    const int limit = 10000 + 200 * (n_ + m_);
    const int stall_limit = 200;
    bool bland = false;
    int stall = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    for (;;) {
      if (iterations_ >= limit)
        throw SimplexError(std::string("simplex cycling safeguard exhausted in ") + phase);
      const int col = entering_column(bland);
      if (col < 0) return;  // optimal
      const int row = leaving_row(col, bland);
      if (row < 0)
        throw SimplexError(std::string("simplex detected an unbounded ray in ") + phase);
      pivot(row, col);
      ++iterations_;
      const double obj = -reduced_[rhs_col()];
      if (obj < best_obj - 1e-12 * (1.0 + std::fabs(best_obj))) {
        best_obj = obj;
        stall = 0;
      } else if (!bland && ++stall > stall_limit) {
        bland = true;
      }
    }
  }

  void run_phase1() {
    // Phase-1 objective: sum of artificials. Basis is the artificial
    // identity, so the reduced cost of structural column j is -sum_i T_ij.
    reduced_.assign(n_ + m_ + 1, 0.0);
    double rhs_total = 0.0;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) reduced_[j] -= tab_[i][j];
      rhs_total += tab_[i][rhs_col()];
    }
    reduced_[rhs_col()] = -rhs_total;
    run_pivots("phase 1");
    const double infeas = -reduced_[rhs_col()];
    if (infeas > tol_ * (1.0 + std::fabs(rhs_total)))
      throw SimplexError("LP infeasible: phase-1 objective " + std::to_string(infeas));
    purge_artificials();
  }

  // Pivot leftover artificials out of the basis; a row whose structural part
  // is entirely zero is redundant and gets dropped.
  void purge_artificials() {
    for (int i = live_rows() - 1; i >= 0; --i) {
      if (basis_[i] < n_) continue;
      int col = -1;
      double best = 1e-7;
      for (int j = 0; j < n_; ++j) {
        if (std::fabs(tab_[i][j]) > best) {
          best = std::fabs(tab_[i][j]);
          col = j;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        tab_.erase(tab_.begin() + i);
        basis_.erase(basis_.begin() + i);
        row_ids_.erase(row_ids_.begin() + i);
      }
    }
  }

  void run_phase2(const std::vector<double>& objective) {
    reduced_.assign(n_ + m_ + 1, 0.0);
    for (int j = 0; j < n_; ++j) reduced_[j] = objective[j];
    for (int i = 0; i < live_rows(); ++i) {
      const int b = basis_[i];
      const double cb = b < n_ ? objective[b] : 0.0;
      if (cb == 0.0) continue;
      for (int j = 0; j <= rhs_col(); ++j) reduced_[j] -= cb * tab_[i][j];
    }
    run_pivots("phase 2");
  }

  LpResult extract(const std::vector<double>& objective) const {
    LpResult res;
    res.x.assign(n_, 0.0);
    for (int i = 0; i < live_rows(); ++i) {
      if (basis_[i] < n_) {
        const double v = tab_[i][rhs_col()];
        res.x[basis_[i]] = v < 0.0 && v > -tol_ ? 0.0 : v;
      }
    }
    // The reduced cost of artificial k is -y_k in the sign-flipped system;
    // dropped redundant rows keep multiplier 0.
    res.duals.assign(m_, 0.0);
    for (int k = 0; k < m_; ++k) res.duals[k] = -flip_[k] * reduced_[n_ + k];
    double value = 0.0;
    for (int j = 0; j < n_; ++j) value += objective[j] * res.x[j];
    res.value = value;
    res.iterations = iterations_;
    return res;
  }

  int n_ = 0;
  int m_ = 0;
  double tol_ = 1e-9;
  Matrix tab_;
  std::vector<double> reduced_;
  std::vector<int> basis_;
  std::vector<int> row_ids_;
  std::vector<double> flip_;
  int iterations_ = 0;
};

}  // namespace detail

// Solves min c.x, Ax = b, x >= 0. Returns an optimal basic solution together
// with dual multipliers certifying optimality (all reduced costs
// c_j - duals.A_j >= -tol). Throws SimplexError on infeasibility or when the
// cycling safeguard trips.
inline LpResult solve_simplex(const LpProblem& lp, double tol = 1e-9) {
  detail::SimplexTableau tableau(lp, tol);
  return tableau.solve(lp.objective);
}

// The certificate check used by callers and tests: max primal residual and
// min reduced cost of `result` against the original problem data.
struct LpCertificate {
  double primal_residual = 0.0;  // max |A x - b|
  double min_reduced_cost = 0.0;
  double duality_gap = 0.0;  // |c.x - b.y|
};

inline LpCertificate certify_lp(const LpProblem& lp, const LpResult& result) {
  LpCertificate cert;
  double ydotb = 0.0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double ax = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) ax += lp.rows[i][j] * result.x[j];
    cert.primal_residual = std::max(cert.primal_residual, std::fabs(ax - lp.rhs[i]));
    ydotb += result.duals[i] * lp.rhs[i];
  }
  cert.min_reduced_cost = std::numeric_limits<double>::infinity();
  for (int j = 0; j < lp.num_vars; ++j) {
    double yaj = 0.0;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) yaj += result.duals[i] * lp.rows[i][j];
    cert.min_reduced_cost = std::min(cert.min_reduced_cost, lp.objective[j] - yaj);
  }
  if (lp.num_vars == 0) cert.min_reduced_cost = 0.0;
  cert.duality_gap = std::fabs(result.value - ydotb);
  return cert;
}

}  // namespace cyclestar
