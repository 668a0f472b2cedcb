#pragma once

// Small nonzero integer solutions of underdetermined systems A t = 0 with the
// Bombieri-Vaaler bound max|t_m| <= |det(A A^T)|^{1/(2(M-L))} as a hard check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "multeq/error.hpp"
#include "multeq/modarith.hpp"
#include "multeq/rational.hpp"

namespace multeq {

inline constexpr double kSiegelBudget = 1e9;

struct SiegelInstance {
  Matrix A;
  int L = 0;
  int M = 0;
  std::int64_t gram_det = 0;
  std::int64_t bound = 0;  // floor(gram_det^{1/(2(M-L))}), 0 when gram_det = 0
};

struct SiegelSolution {
  std::vector<std::int64_t> t;
  std::int64_t sup_norm = 0;
  SiegelInstance instance;
};

/// |det(A A^T)| by Bareiss fraction-free elimination.
inline std::int64_t gram_det(const Matrix& A) {
  const std::size_t L = A.size();
  if (L == 0) return 1;
  const std::size_t M = A[0].size();
  if (L > M) fail(ErrorKind::InvalidArgument, "gram_det needs L <= M");
  std::vector<std::vector<i128>> g(L, std::vector<i128>(L, 0));
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t j = 0; j < L; ++j)
      for (std::size_t k = 0; k < M; ++k) g[i][j] += static_cast<i128>(A[i][k]) * A[j][k];

  i128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < L; ++k) {
    std::size_t piv = k;
    while (piv < L && g[piv][k] == 0) ++piv;
    if (piv == L) return 0;
    if (piv != k) {
      std::swap(g[piv], g[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < L; ++i) {
      for (std::size_t j = k + 1; j < L; ++j) g[i][j] = (g[i][j] * g[k][k] - g[i][k] * g[k][j]) / prev;
      g[i][k] = 0;
    }
    prev = g[k][k];
  }
  i128 det = g[L - 1][L - 1] * sign;
  return detail::narrow(det < 0 ? -det : det);
}

/// Largest b >= 0 with b^k <= x.
inline std::int64_t integer_root_floor(std::int64_t x, int k) {
  if (x <= 0) return 0;
  auto fits = [&](std::int64_t b) {
    i128 p = 1;
    for (int i = 0; i < k; ++i) {
      p *= b;
      if (p > x) return false;
    }
    return true;
  };
  std::int64_t lo = 0, hi = 1;
  while (fits(hi)) hi *= 2;
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

inline SiegelInstance make_siegel_instance(const Matrix& A) {
  SiegelInstance inst;
  inst.A = A;
  inst.L = static_cast<int>(A.size());
  inst.M = A.empty() ? 0 : static_cast<int>(A[0].size());
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != inst.M) fail(ErrorKind::InvalidArgument, "ragged matrix");
  if (inst.L >= inst.M) fail(ErrorKind::InvalidArgument, "need fewer equations than unknowns (L < M)");
  inst.gram_det = gram_det(A);
  inst.bound = integer_root_floor(inst.gram_det, 2 * (inst.M - inst.L));
  return inst;
}

/// Minimal sup-norm nonzero solution of A t = 0, lexicographically least
/// among ties. The search walks radii 1, 2, ... over the free coordinates of
/// the reduced echelon form and lifts the pivot coordinates exactly.
inline SiegelSolution siegel_solve(const Matrix& A) {
  SiegelSolution sol;
  sol.instance = make_siegel_instance(A);
  const int L = sol.instance.L, M = sol.instance.M;

  // Reduced row echelon form over Q.
  std::vector<std::vector<Rational>> R(L, std::vector<Rational>(M));
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < M; ++j) R[i][j] = Rational(A[i][j]);
  std::vector<int> pivots;
  int rank = 0;
  for (int col = 0; col < M && rank < L; ++col) {
    int piv = rank;
    while (piv < L && R[piv][col] == Rational(0)) ++piv;
    if (piv == L) continue;
    std::swap(R[piv], R[rank]);
    Rational s = R[rank][col].reciprocal();
    for (auto& x : R[rank]) x *= s;
    for (int r = 0; r < L; ++r) {
      if (r == rank || R[r][col] == Rational(0)) continue;
      Rational f = R[r][col];
      for (int j = 0; j < M; ++j) R[r][j] -= f * R[rank][j];
    }
    pivots.push_back(col);
    ++rank;
  }
  std::vector<int> frees;
  for (int j = 0; j < M; ++j)
    if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) frees.push_back(j);
  const int k = static_cast<int>(frees.size());

  // t_{p_r} = (sum_f N[r][f] t_f) / D
  std::int64_t D = 1;
  for (int r = 0; r < rank; ++r)
    for (int f : frees) D = std::lcm(D, R[r][f].den());
  std::vector<std::vector<std::int64_t>> N(rank, std::vector<std::int64_t>(k));
  for (int r = 0; r < rank; ++r)
    for (int c = 0; c < k; ++c) N[r][c] = (-R[r][frees[c]] * Rational(D)).num();

  const bool bounded = sol.instance.gram_det > 0;
  double spent = 0;
  std::vector<std::int64_t> t(M), tf(k);
  for (std::int64_t radius = 1;; ++radius) {
    if (bounded && radius > sol.instance.bound)
      fail(ErrorKind::InternalError, "no solution within the Siegel bound");
    double cells = std::pow(static_cast<double>(2 * radius + 1), k);
    spent += cells;
    if (spent > kSiegelBudget) fail(ErrorKind::BudgetExceeded, "Siegel search budget exceeded");

    std::optional<std::vector<std::int64_t>> best;
    std::fill(tf.begin(), tf.end(), -radius);
    while (true) {
      bool nonzero = std::any_of(tf.begin(), tf.end(), [](std::int64_t x) { return x != 0; });
      bool ok = nonzero;
      for (int c = 0; c < k && ok; ++c) t[frees[c]] = tf[c];
      for (int r = 0; r < rank && ok; ++r) {
        i128 acc = 0;
        for (int c = 0; c < k; ++c) acc += static_cast<i128>(N[r][c]) * tf[c];
        if (acc % D != 0) {
          ok = false;
          break;
        }
        i128 v = acc / D;
        if (v > radius || v < -radius) ok = false;
        t[pivots[r]] = static_cast<std::int64_t>(v);
      }
      if (ok && (!best || t < *best)) best = t;
      int c = k - 1;
      while (c >= 0 && tf[c] == radius) tf[c--] = -radius;
      if (c < 0) break;
      ++tf[c];
    }
    if (best) {
      sol.t = *best;
      sol.sup_norm = 0;
      for (auto x : sol.t) sol.sup_norm = std::max<std::int64_t>(sol.sup_norm, x < 0 ? -x : x);
      return sol;
    }
  }
}

/// Whether A t = 0 exactly.
inline bool is_kernel_vector(const Matrix& A, const std::vector<std::int64_t>& t) {
  for (const auto& row : A) {
    i128 acc = 0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += static_cast<i128>(row[j]) * t[j];
    if (acc != 0) return false;
  }
  return true;
}

}  // namespace multeq
