#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cbbc/rational.hpp"

namespace cbbc {

/// One inequality a.c <= b over the decision coefficients.
struct LinearRow {
  std::vector<double> a;
  double b = 0;
};

enum class LpStatus { Feasible, Infeasible, Error };

struct LpResult {
  LpStatus status = LpStatus::Error;
  std::vector<double> x;  // coefficient values
  double slack = 0;       // achieved minimum slack across all rows
  std::string detail;
};

/// Maximizes the minimum slack t subject to a_r.c + t <= b_r for every row
/// and |c_m| <= coeff_bound. Feasible means the optimum t is nonnegative
/// (every row then holds with margin t). Rows are L-inf normalized so the
/// slack is scale-free.
///
/// Method: primal active-set simplex on the inequality form over z = (c, t).
/// The box corner c = -C with the tightest slack row is a feasible vertex,
/// so no phase-1 is needed; Dantzig pivoting with a Bland fallback after
/// degenerate stalls keeps the iteration deterministic and finite.
class MaxMarginLp {
 public:
  explicit MaxMarginLp(size_t nvars, double coeff_bound = 1000.0)
      : n_(nvars), bound_(coeff_bound) {}

  void add(std::vector<double> a, double b) {
    if (a.size() != n_) throw SolverError("LP row arity mismatch");
    double norm = 0;
    for (double v : a) norm = std::max(norm, std::fabs(v));
    if (norm == 0) norm = 1;  // 0.c + t <= b still bounds the slack
    for (double& v : a) v /= norm;
    rows_a_.push_back(std::move(a));
    rows_b_.push_back(b / norm);
  }

  size_t rows() const { return rows_a_.size(); }

  LpResult solve() const {
    const size_t nz = n_ + 1;  // z = (c_1..c_n, t)
    const size_t m = rows_a_.size();
    // full row list: slack rows, then c-box rows, then t-box rows
    auto row_normal = [&](size_t r, std::vector<double>& g) {
      g.assign(nz, 0.0);
      if (r < m) {
        for (size_t j = 0; j < n_; ++j) g[j] = rows_a_[r][j];
        g[n_] = 1.0;
      } else if (r < m + 2 * n_) {
        size_t j = (r - m) / 2;
        g[j] = ((r - m) % 2 == 0) ? 1.0 : -1.0;
      } else {
        g[n_] = ((r - m - 2 * n_) == 0) ? 1.0 : -1.0;
      }
    };
    auto row_bound = [&](size_t r) -> double {
      if (r < m) return rows_b_[r];
      if (r < m + 2 * n_) return bound_;
      return kSlackBound;
    };
    const size_t total = m + 2 * n_ + 2;

    // initial vertex: every c_m at its lower bound, t at the tightest row
    std::vector<double> z(nz, 0.0);
    for (size_t j = 0; j < n_; ++j) z[j] = -bound_;
    std::vector<size_t> active;
    for (size_t j = 0; j < n_; ++j) active.push_back(m + 2 * j + 1);  // -c_j <= C
    double t0 = kSlackBound;
    size_t t_row = total - 1;  // t <= kSlackBound
    std::vector<double> g(nz);
    for (size_t r = 0; r < m; ++r) {
      double dot = 0;
      for (size_t j = 0; j < n_; ++j) dot += rows_a_[r][j] * z[j];
      double cap = rows_b_[r] - dot;
      if (cap < t0) {
        t0 = cap;
        t_row = r;
      }
    }
    z[n_] = t0;
    active.push_back(t_row);

    std::vector<double> lambda(nz), dir(nz);
    size_t iter = 0, degenerate = 0;
    const size_t max_iter = 50000 + 50 * total;
    for (;;) {
      if (++iter > max_iter)
        return {LpStatus::Error, {}, 0, "active-set iteration cap exceeded"};
      // multipliers: W^T lambda = f with f = e_t
      std::vector<std::vector<double>> W(active.size());
      for (size_t i = 0; i < active.size(); ++i) row_normal(active[i], W[i]);
      if (!solve_multipliers(W, lambda))
        return {LpStatus::Error, {}, 0, "singular active set"};

      bool bland = degenerate > active.size() + 8;
      size_t drop = SIZE_MAX;
      double most_neg = -kEps;
      for (size_t i = 0; i < active.size(); ++i) {
        if (lambda[i] < -kEps) {
          if (bland) {
            if (drop == SIZE_MAX || active[i] < active[drop]) drop = i;
          } else if (lambda[i] < most_neg) {
            most_neg = lambda[i];
            drop = i;
          }
        }
      }
      if (drop == SIZE_MAX) break;  // optimal

      // edge direction: g_i . d = 0 for kept rows, g_drop . d = -1
      if (!solve_direction(W, drop, dir))
        return {LpStatus::Error, {}, 0, "singular edge system"};

      // ratio test over inactive rows
      double alpha = std::numeric_limits<double>::infinity();
      size_t blocking = SIZE_MAX;
      std::vector<char> is_active(total, 0);
      for (size_t r : active) is_active[r] = 1;
      for (size_t r = 0; r < total; ++r) {
        if (is_active[r]) continue;
        row_normal(r, g);
        double gd = 0;
        for (size_t j = 0; j < nz; ++j) gd += g[j] * dir[j];
        if (gd <= kEps) continue;
        double gz = 0;
        for (size_t j = 0; j < nz; ++j) gz += g[j] * z[j];
        double ratio = (row_bound(r) - gz) / gd;
        if (ratio < alpha - 1e-12 ||
            (ratio < alpha + 1e-12 && (blocking == SIZE_MAX || r < blocking))) {
          alpha = ratio;
          blocking = r;
        }
      }
      if (blocking == SIZE_MAX)
        return {LpStatus::Error, {}, 0, "unbounded edge (missing box row)"};
      if (alpha < 0) alpha = 0;
      degenerate = alpha <= 1e-12 ? degenerate + 1 : 0;
      for (size_t j = 0; j < nz; ++j) z[j] += alpha * dir[j];
      active[drop] = blocking;
    }

    LpResult res;
    res.slack = z[n_];
    res.status = z[n_] >= -kFeasTol ? LpStatus::Feasible : LpStatus::Infeasible;
    res.x.assign(z.begin(), z.begin() + n_);
    return res;
  }

 private:
  static constexpr double kSlackBound = 1e9;
  static constexpr double kEps = 1e-9;
  static constexpr double kFeasTol = 1e-9;

  // Solves W^T lambda = e_t by Gaussian elimination on the (nz x nz) system.
  static bool solve_multipliers(const std::vector<std::vector<double>>& W,
                                std::vector<double>& lambda) {
    const size_t n = W.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) A[i][k] = W[k][i];  // transpose
    for (size_t i = 0; i < n; ++i) A[i][n] = (i == n - 1) ? 1.0 : 0.0;  // f = e_t
    return gauss(A, lambda);
  }

  // Solves g_i.d = 0 (i != drop), g_drop.d = -1.
  static bool solve_direction(const std::vector<std::vector<double>>& W,
                              size_t drop, std::vector<double>& d) {
    const size_t n = W.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = 0; k < n; ++k) A[i][k] = W[i][k];
      A[i][n] = (i == drop) ? -1.0 : 0.0;
    }
    return gauss(A, d);
  }

  static bool gauss(std::vector<std::vector<double>>& A, std::vector<double>& x) {
    const size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
      size_t sel = col;
      for (size_t i = col; i < n; ++i)
        if (std::fabs(A[i][col]) > std::fabs(A[sel][col])) sel = i;
      if (std::fabs(A[sel][col]) < 1e-12) return false;
      std::swap(A[sel], A[col]);
      for (size_t i = 0; i < n; ++i) {
        if (i == col) continue;
        double factor = A[i][col] / A[col][col];
        if (factor == 0) continue;
        for (size_t j = col; j <= n; ++j) A[i][j] -= factor * A[col][j];
      }
    }
    x.assign(n, 0.0);
    for (size_t i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
    return true;
  }

  size_t n_;
  double bound_;
  std::vector<std::vector<double>> rows_a_;
  std::vector<double> rows_b_;
};

}  // namespace cbbc
