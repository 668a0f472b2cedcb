#pragma once

// Residue arithmetic and small dense linear algebra over Z/qZ.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "multeq/error.hpp"

namespace multeq {

using Matrix = std::vector<std::vector<std::int64_t>>;

inline std::int64_t mod(std::int64_t a, std::int64_t q) {
  std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

/// Representative of a mod q in (-q/2, q/2].
inline std::int64_t centered(std::int64_t a, std::int64_t q) {
  std::int64_t r = mod(a, q);
  return 2 * r > q ? r - q : r;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t q) {
  return static_cast<std::int64_t>((static_cast<__int128>(mod(a, q)) * mod(b, q)) % q);
}

inline std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t q) {
  std::int64_t r = 1 % q;
  base = mod(base, q);
  while (exp != 0) {
    if (exp & 1U) r = mul_mod(r, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1U;
  }
  return r;
}

/// Inverse of a modulo q (q need not be prime; a must be a unit).
inline std::int64_t inv_mod(std::int64_t a, std::int64_t q) {
  std::int64_t old_r = mod(a, q), r = q;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t quot = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - quot * r};
    std::tie(old_s, s) = std::pair{s, old_s - quot * s};
  }
  if (old_r != 1) fail(ErrorKind::ZeroInverse, "element is not invertible mod " + std::to_string(q));
  return mod(old_s, q);
}

/// Deterministic trial-division primality test (desk-scale moduli).
inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0 || n % 3 == 0) return false;
  for (std::int64_t d = 5; d * d <= n; d += 6)
    if (n % d == 0 || n % (d + 2) == 0) return false;
  return true;
}

inline Matrix identity_matrix(std::size_t n) {
  Matrix m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline std::vector<std::int64_t> mat_vec_mod(const Matrix& m, const std::vector<std::int64_t>& v, std::int64_t q) {
  std::vector<std::int64_t> out(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += static_cast<__int128>(m[i][j]) * v[j];
    out[i] = static_cast<std::int64_t>(((acc % q) + q) % q);
  }
  return out;
}

inline Matrix mat_mul_mod(const Matrix& a, const Matrix& b, std::int64_t q) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Matrix out(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      __int128 acc = 0;
      for (std::size_t t = 0; t < k; ++t) acc += static_cast<__int128>(a[i][t]) * b[t][j];
      out[i][j] = static_cast<std::int64_t>(((acc % q) + q) % q);
    }
  return out;
}

/// Inverse of a square matrix over F_q (q prime), or nullopt when singular.
inline std::optional<Matrix> inverse_mod(Matrix a, std::int64_t q) {
  std::size_t n = a.size();
  Matrix inv = identity_matrix(n);
  for (auto& row : a)
    for (auto& x : row) x = mod(x, q);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    std::int64_t s = inv_mod(a[col][col], q);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = mul_mod(a[col][j], s, q);
      inv[col][j] = mul_mod(inv[col][j], s, q);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      std::int64_t f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] = mod(a[r][j] - mul_mod(f, a[col][j], q), q);
        inv[r][j] = mod(inv[r][j] - mul_mod(f, inv[col][j], q), q);
      }
    }
  }
  return inv;
}

inline std::int64_t det_mod(Matrix a, std::int64_t q) {
  std::size_t n = a.size();
  std::int64_t det = 1;
  for (auto& row : a)
    for (auto& x : row) x = mod(x, q);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = mod(-det, q);
    }
    det = mul_mod(det, a[col][col], q);
    std::int64_t s = inv_mod(a[col][col], q);
    for (std::size_t r = col + 1; r < n; ++r) {
      std::int64_t f = mul_mod(a[r][col], s, q);
      for (std::size_t j = col; j < n; ++j) a[r][j] = mod(a[r][j] - mul_mod(f, a[col][j], q), q);
    }
  }
  return det;
}

inline Matrix transpose(const Matrix& a) {
  if (a.empty()) return {};
  Matrix t(a[0].size(), std::vector<std::int64_t>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

}  // namespace multeq
