#pragma once

#include <stdexcept>
#include <vector>

namespace sheafctx {

/// Equality-form feasibility system: find x >= 0 with A x = b.
template <class Scalar>
struct LinearSystem {
  int rows = 0;
  int cols = 0;
  std::vector<Scalar> coeff;  // row-major, rows x cols
  std::vector<Scalar> rhs;    // size rows

  Scalar& at(int r, int c) { return coeff[static_cast<size_t>(r) * cols + c]; }
  const Scalar& at(int r, int c) const { return coeff[static_cast<size_t>(r) * cols + c]; }

  static LinearSystem zero(int rows, int cols) {
    LinearSystem s;
    s.rows = rows;
    s.cols = cols;
    s.coeff.assign(static_cast<size_t>(rows) * cols, Scalar(0));
    s.rhs.assign(rows, Scalar(0));
    return s;
  }
};

/// Outcome of the feasibility decision. Exactly one of `solution` /
/// `certificate` is meaningful: a feasible point, or a Farkas vector y with
/// yᵀA <= 0 componentwise and yᵀb > 0.
template <class Scalar>
struct Feasibility {
  bool feasible = false;
  std::vector<Scalar> solution;
  std::vector<Scalar> certificate;
};

/// Verifies a Farkas infeasibility certificate against the system.
template <class Scalar>
bool certifies_infeasible(const LinearSystem<Scalar>& sys,
                          const std::vector<Scalar>& y) {
  if (static_cast<int>(y.size()) != sys.rows) return false;
  Scalar yb(0);
  for (int r = 0; r < sys.rows; ++r) yb += y[r] * sys.rhs[r];
  if (!(yb > Scalar(0))) return false;
  for (int c = 0; c < sys.cols; ++c) {
    Scalar dot(0);
    for (int r = 0; r < sys.rows; ++r) dot += y[r] * sys.at(r, c);
    if (dot > Scalar(0)) return false;
  }
  return true;
}

/// Phase-1 simplex with Bland's anti-cycling rule over an exact ordered
/// field. Minimizes the sum of artificial variables on [A | I]; zero
/// optimum yields a feasible point, a positive optimum yields the Farkas
/// certificate read off the artificial columns of the final cost row.
/// Both outputs are re-verified before returning.
template <class Scalar>
Feasibility<Scalar> solve_feasibility(const LinearSystem<Scalar>& sys) {
  const int m = sys.rows;
  const int n = sys.cols;
  const int width = n + m + 1;  // structural | artificial | rhs
  const int rhs_col = n + m;

  // Tableau with b >= 0; remember flipped rows for the certificate.
  std::vector<Scalar> tab(static_cast<size_t>(m) * width, Scalar(0));
  std::vector<int> flip(m, 1);
  auto cell = [&](int r, int c) -> Scalar& {
    return tab[static_cast<size_t>(r) * width + c];
  };
  for (int r = 0; r < m; ++r) {
    flip[r] = sys.rhs[r] < Scalar(0) ? -1 : 1;
    for (int c = 0; c < n; ++c) {
      cell(r, c) = flip[r] < 0 ? -sys.at(r, c) : sys.at(r, c);
    }
    cell(r, n + r) = Scalar(1);
    cell(r, rhs_col) = flip[r] < 0 ? -sys.rhs[r] : sys.rhs[r];
  }

  // Reduced-cost row for min sum(artificials).
  std::vector<Scalar> cost(width, Scalar(0));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) cost[c] -= cell(r, c);
  }

  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) basis[r] = n + r;

  while (true) {
    int entering = -1;
    for (int c = 0; c < n + m; ++c) {
      if (cost[c] < Scalar(0)) { entering = c; break; }
    }
    if (entering < 0) break;

    int leaving = -1;
    for (int r = 0; r < m; ++r) {
      if (!(cell(r, entering) > Scalar(0))) continue;
      if (leaving < 0) { leaving = r; continue; }
      Scalar lhs = cell(r, rhs_col) * cell(leaving, entering);
      Scalar rhs = cell(leaving, rhs_col) * cell(r, entering);
      if (lhs < rhs || (lhs == rhs && basis[r] < basis[leaving])) leaving = r;
    }
    if (leaving < 0) {
      // Phase-1 objective is bounded below by zero; an unbounded ray here
      // means the tableau is corrupt.
      throw std::logic_error("phase-1 simplex: unbounded improving ray");
    }

    // Pivot on (leaving, entering).
    Scalar pivot = cell(leaving, entering);
    for (int c = 0; c < width; ++c) cell(leaving, c) /= pivot;
    for (int r = 0; r < m; ++r) {
      if (r == leaving) continue;
      Scalar factor = cell(r, entering);
      if (factor == Scalar(0)) continue;
      for (int c = 0; c < width; ++c) cell(r, c) -= factor * cell(leaving, c);
    }
    Scalar cost_factor = cost[entering];
    if (cost_factor != Scalar(0)) {
      for (int c = 0; c < width; ++c) {
        if (c == rhs_col) continue;
        cost[c] -= cost_factor * cell(leaving, c);
      }
    }
    basis[leaving] = entering;
  }

  // Optimal phase-1 value: the artificials still basic carry it.
  Scalar objective(0);
  for (int r = 0; r < m; ++r) {
    if (basis[r] >= n) objective += cell(r, rhs_col);
  }

  Feasibility<Scalar> result;
  if (objective == Scalar(0)) {
    result.feasible = true;
    result.solution.assign(n, Scalar(0));
    for (int r = 0; r < m; ++r) {
      if (basis[r] < n) result.solution[basis[r]] = cell(r, rhs_col);
    }
    for (int r = 0; r < m; ++r) {
      Scalar acc(0);
      for (int c = 0; c < n; ++c) acc += sys.at(r, c) * result.solution[c];
      if (acc != sys.rhs[r]) {
        throw std::logic_error("phase-1 simplex: solution fails verification");
      }
    }
  } else {
    // Dual optimum y_j = 1 - reduced cost of artificial j, undoing row flips.
    result.certificate.assign(m, Scalar(0));
    for (int r = 0; r < m; ++r) {
      Scalar y = Scalar(1) - cost[n + r];
      result.certificate[r] = flip[r] < 0 ? -y : y;
    }
    if (!certifies_infeasible(sys, result.certificate)) {
      throw std::logic_error("phase-1 simplex: certificate fails verification");
    }
  }
  return result;
}

}  // namespace sheafctx
