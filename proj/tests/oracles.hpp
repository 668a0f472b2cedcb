#pragma once

// Brute-force reference implementations used only by the tests. They share
// no code paths with the library beyond the Rational value type.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "multeq/rational.hpp"

namespace oracle {

using Vec = std::vector<std::int64_t>;
using multeq::Rational;

inline std::int64_t md(std::int64_t a, std::int64_t q) { return ((a % q) + q) % q; }

/// Schoolbook product of polynomials (low-first) reduced by a monic modulus.
inline Vec poly_mulmod(const Vec& a, const Vec& b, const Vec& f, std::int64_t q) {
  const int n = static_cast<int>(f.size()) - 1;
  Vec prod(2 * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) prod[i + j] = md(prod[i + j] + a[i] * b[j], q);
  for (int k = 2 * n - 1; k >= n; --k) {
    std::int64_t c = prod[k];
    if (c == 0) continue;
    for (int i = 0; i <= n; ++i) prod[k - n + i] = md(prod[k - n + i] - c * f[i], q);
  }
  prod.resize(n);
  return prod;
}

/// Irreducible iff no product of two monic polynomials of positive degree equals f.
inline bool irreducible_by_products(const Vec& f, std::int64_t q) {
  const int n = static_cast<int>(f.size()) - 1;
  auto all_monic = [&](int deg) {
    std::vector<Vec> out;
    Vec p(deg + 1, 0);
    p[deg] = 1;
    while (true) {
      out.push_back(p);
      int i = 0;
      while (i < deg && ++p[i] == q) p[i++] = 0;
      if (i == deg) break;
    }
    return out;
  };
  for (int d = 1; d <= n / 2; ++d)
    for (const auto& g : all_monic(d))
      for (const auto& h : all_monic(n - d)) {
        Vec prod(n + 1, 0);
        for (int i = 0; i <= d; ++i)
          for (int j = 0; j <= n - d; ++j) prod[i + j] = md(prod[i + j] + g[i] * h[j], q);
        if (prod == f) return false;
      }
  return true;
}

/// #{(a1,a2,a3,a4) in A^4 : a1 a2 = a3 a4} by direct quadruple counting
/// under a caller-supplied multiplication.
template <class Mul>
std::uint64_t energy_quadruples(const std::vector<std::int64_t>& A, Mul mul) {
  std::uint64_t count = 0;
  for (auto a1 : A)
    for (auto a2 : A) {
      std::int64_t p = mul(a1, a2);
      for (auto a3 : A)
        for (auto a4 : A)
          if (mul(a3, a4) == p) ++count;
    }
  return count;
}

/// Exact rank of integer vectors via fraction-free elimination.
inline int rank(std::vector<std::vector<__int128>> rows) {
  int r = 0;
  const int cols = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[r]);
    for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
      __int128 a = rows[r][c], b = rows[i][c];
      for (int k = 0; k < cols; ++k) rows[i][k] = rows[i][k] * a - rows[r][k] * b;
      __int128 g = 0;
      for (auto x : rows[i]) {
        __int128 y = x < 0 ? -x : x;
        while (y) {
          __int128 t = g % y;
          g = y;
          y = t;
        }
      }
      if (g > 1)
        for (auto& x : rows[i]) x /= g;
    }
    ++r;
  }
  return r;
}

/// Successive minima by brute force: enumerate every integer vector with
/// |u_i| <= bound_i, keep members, sort by norm, and read off lambda_j as the
/// least norm at which the points of norm <= it span dimension j.
template <class Member, class Norm>
std::vector<Rational> minima_brute(int dim, const Vec& bound, Member member, Norm norm) {
  std::vector<std::pair<Rational, Vec>> pts;
  Vec u(dim);
  for (int i = 0; i < dim; ++i) u[i] = -bound[i];
  while (true) {
    bool zero = std::all_of(u.begin(), u.end(), [](std::int64_t x) { return x == 0; });
    if (!zero && member(u)) pts.emplace_back(norm(u), u);
    int i = dim - 1;
    while (i >= 0 && u[i] == bound[i]) u[i--] = -bound[i];
    if (i < 0) break;
    ++u[i];
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Rational> out;
  std::vector<std::vector<__int128>> rows;
  std::size_t k = 0;
  while (k < pts.size() && static_cast<int>(out.size()) < dim) {
    Rational level = pts[k].first;
    while (k < pts.size() && pts[k].first == level) {
      rows.emplace_back(pts[k].second.begin(), pts[k].second.end());
      ++k;
    }
    int r = rank(rows);
    while (static_cast<int>(out.size()) < r) out.push_back(level);
  }
  return out;
}

}  // namespace oracle
