#pragma once

// Exact arithmetic in F_q and F_{q^n}. Elements are stored by their
// coordinates in a chosen basis w_1..w_n of F_{q^n} over F_q; products are
// formed in the power basis modulo a monic irreducible polynomial.
//
// Bound: every intermediate is a sum of at most n products of residues in
// [0, q), i.e. at most n*q^2, and q^n <= 2^20 is enforced, so 64-bit
// integers never overflow.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multeq/error.hpp"
#include "multeq/modarith.hpp"

namespace multeq {

/// Polynomials over F_q, coefficients low-degree first.
using Poly = std::vector<std::int64_t>;

inline constexpr std::int64_t kMaxFieldOrder = std::int64_t{1} << 20;

struct FieldParams {
  std::int64_t q = 0;
  int n = 0;
  Poly modulus;   // n+1 coefficients, monic
  Matrix basis;   // column j = power-basis coordinates of w_j
  Matrix basis_inv;
  std::int64_t order = 0;  // q^n
};

struct FieldElem {
  std::vector<std::int64_t> coords;

  friend bool operator==(const FieldElem&, const FieldElem&) = default;
  friend auto operator<=>(const FieldElem&, const FieldElem&) = default;
};

/// Matrix of multiplication by z in the w-basis: y = M_z x.
struct MulMatrix {
  Matrix entries;
};

namespace poly {

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

/// Remainder of a modulo a monic-or-not divisor b (b nonzero, trimmed).
inline Poly rem(Poly a, const Poly& b, std::int64_t q) {
  trim(a);
  int db = degree(b);
  std::int64_t lead_inv = inv_mod(b.back(), q);
  while (degree(a) >= db) {
    int shift = degree(a) - db;
    std::int64_t f = mul_mod(a.back(), lead_inv, q);
    for (int i = 0; i <= db; ++i) a[shift + i] = mod(a[shift + i] - mul_mod(f, b[i], q), q);
    trim(a);
  }
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, std::int64_t q) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % q;
  }
  trim(r);
  return r;
}

inline Poly sub(Poly a, const Poly& b, std::int64_t q) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod(a[i] - b[i], q);
  trim(a);
  return a;
}

/// Quotient and remainder.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, std::int64_t q) {
  trim(a);
  int db = degree(b);
  Poly quot(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
  std::int64_t lead_inv = inv_mod(b.back(), q);
  while (degree(a) >= db) {
    int shift = degree(a) - db;
    std::int64_t f = mul_mod(a.back(), lead_inv, q);
    quot[shift] = f;
    for (int i = 0; i <= db; ++i) a[shift + i] = mod(a[shift + i] - mul_mod(f, b[i], q), q);
    trim(a);
  }
  trim(quot);
  return {quot, a};
}

/// Exhaustive irreducibility test: no monic factor of degree 1..deg/2.
inline bool is_irreducible(const Poly& f, std::int64_t q) {
  int n = degree(f);
  if (n < 1) return false;
  if (n == 1) return true;
  for (int d = 1; d <= n / 2; ++d) {
    // Odometer over the d low coefficients of a monic degree-d divisor.
    Poly g(d + 1, 0);
    g[d] = 1;
    while (true) {
      if (rem(f, g, q).empty()) return false;
      int i = 0;
      while (i < d && ++g[i] == q) g[i++] = 0;
      if (i == d) break;
    }
  }
  return true;
}

}  // namespace poly

namespace detail {

inline std::vector<std::int64_t> to_power(const FieldParams& f, const std::vector<std::int64_t>& coords) {
  return mat_vec_mod(f.basis, coords, f.q);
}

inline std::vector<std::int64_t> from_power(const FieldParams& f, const std::vector<std::int64_t>& pcoords) {
  return mat_vec_mod(f.basis_inv, pcoords, f.q);
}

/// Product of two power-basis coordinate vectors reduced by the modulus.
inline std::vector<std::int64_t> power_mul(const FieldParams& f, const std::vector<std::int64_t>& a,
                                           const std::vector<std::int64_t>& b) {
  const int n = f.n;
  const std::int64_t q = f.q;
  std::vector<std::int64_t> prod(2 * n - 1, 0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % q;
  }
  // Reduce t^k for k >= n using t^n = -(m_0 + ... + m_{n-1} t^{n-1}).
  for (int k = 2 * n - 2; k >= n; --k) {
    std::int64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (int i = 0; i < n; ++i) prod[k - n + i] = mod(prod[k - n + i] - c * f.modulus[i], q);
  }
  prod.resize(n);
  return prod;
}

}  // namespace detail

/// Lexicographically smallest (low-degree coefficient first) monic irreducible
/// polynomial of degree n over F_q.
inline Poly default_modulus(std::int64_t q, int n) {
  Poly f(n + 1, 0);
  f[n] = 1;
  // Lex order on (c_0, ..., c_{n-1}) means c_{n-1} varies fastest.
  while (true) {
    if (poly::is_irreducible(f, q)) return f;
    int i = n - 1;
    while (i >= 0 && ++f[i] == q) f[i--] = 0;
    if (i < 0) break;
  }
  fail(ErrorKind::InternalError, "no irreducible polynomial found");
}

inline FieldParams make_field(std::int64_t q, int n, std::optional<Poly> modulus = std::nullopt,
                              std::optional<Matrix> basis = std::nullopt) {
  if (q < 2 || n < 1) fail(ErrorKind::InvalidArgument, "need q >= 2 and n >= 1");
  if (!is_prime(q)) fail(ErrorKind::NonPrimeModulus, std::to_string(q) + " is not prime");
  std::int64_t order = 1;
  for (int i = 0; i < n; ++i) {
    order *= q;
    if (order > kMaxFieldOrder) fail(ErrorKind::ParameterTooLarge, "q^n exceeds 2^20");
  }

  FieldParams f;
  f.q = q;
  f.n = n;
  f.order = order;
  if (modulus) {
    Poly m = *modulus;
    if (static_cast<int>(m.size()) != n + 1) fail(ErrorKind::InvalidArgument, "modulus must have n+1 coefficients");
    for (auto& c : m) c = mod(c, q);
    if (m[n] != 1) fail(ErrorKind::InvalidArgument, "modulus must be monic");
    if (!poly::is_irreducible(m, q)) fail(ErrorKind::ReduciblePolynomial, "modulus is reducible over F_q");
    f.modulus = std::move(m);
  } else {
    f.modulus = default_modulus(q, n);
  }

  if (basis) {
    Matrix b = *basis;
    if (static_cast<int>(b.size()) != n) fail(ErrorKind::InvalidArgument, "basis must be n x n");
    for (auto& row : b) {
      if (static_cast<int>(row.size()) != n) fail(ErrorKind::InvalidArgument, "basis must be n x n");
      for (auto& x : row) x = mod(x, q);
    }
    f.basis = std::move(b);
  } else {
    f.basis = identity_matrix(n);
  }
  auto inv = inverse_mod(f.basis, q);
  if (!inv) fail(ErrorKind::SingularBasis, "basis vectors are linearly dependent over F_q");
  f.basis_inv = std::move(*inv);
  return f;
}

inline FieldElem ff_zero(const FieldParams& f) { return {std::vector<std::int64_t>(f.n, 0)}; }

inline FieldElem ff_one(const FieldParams& f) {
  std::vector<std::int64_t> p(f.n, 0);
  p[0] = 1;
  return {detail::from_power(f, p)};
}

/// Element with the given w-basis coordinates (reduced mod q).
inline FieldElem ff_elem(const FieldParams& f, std::vector<std::int64_t> coords) {
  if (static_cast<int>(coords.size()) != f.n) fail(ErrorKind::InvalidArgument, "element needs n coordinates");
  for (auto& c : coords) c = mod(c, f.q);
  return {std::move(coords)};
}

/// Element whose power-basis coordinates are given.
inline FieldElem ff_from_power(const FieldParams& f, std::vector<std::int64_t> pcoords) {
  for (auto& c : pcoords) c = mod(c, f.q);
  return {detail::from_power(f, pcoords)};
}

inline std::vector<std::int64_t> ff_to_power(const FieldParams& f, const FieldElem& a) {
  return detail::to_power(f, a.coords);
}

inline bool ff_is_zero(const FieldElem& a) {
  for (auto c : a.coords)
    if (c != 0) return false;
  return true;
}

/// Canonical mixed-radix code sum_i coords_i q^i, in [0, q^n).
inline std::int64_t ff_code(const FieldParams& f, const FieldElem& a) {
  std::int64_t code = 0;
  for (int i = f.n - 1; i >= 0; --i) code = code * f.q + a.coords[i];
  return code;
}

inline FieldElem ff_from_code(const FieldParams& f, std::int64_t code) {
  FieldElem a{std::vector<std::int64_t>(f.n)};
  for (int i = 0; i < f.n; ++i) {
    a.coords[i] = code % f.q;
    code /= f.q;
  }
  return a;
}

inline FieldElem ff_add(const FieldParams& f, const FieldElem& a, const FieldElem& b) {
  FieldElem r = a;
  for (int i = 0; i < f.n; ++i) r.coords[i] = (a.coords[i] + b.coords[i]) % f.q;
  return r;
}

inline FieldElem ff_sub(const FieldParams& f, const FieldElem& a, const FieldElem& b) {
  FieldElem r = a;
  for (int i = 0; i < f.n; ++i) r.coords[i] = mod(a.coords[i] - b.coords[i], f.q);
  return r;
}

inline FieldElem ff_mul(const FieldParams& f, const FieldElem& a, const FieldElem& b) {
  auto pa = detail::to_power(f, a.coords);
  auto pb = detail::to_power(f, b.coords);
  return {detail::from_power(f, detail::power_mul(f, pa, pb))};
}

inline FieldElem ff_pow(const FieldParams& f, FieldElem base, std::uint64_t exp) {
  FieldElem r = ff_one(f);
  while (exp != 0) {
    if (exp & 1U) r = ff_mul(f, r, base);
    base = ff_mul(f, base, base);
    exp >>= 1U;
  }
  return r;
}

/// Inverse by the extended Euclidean algorithm on polynomials.
inline FieldElem ff_inv(const FieldParams& f, const FieldElem& a) {
  if (ff_is_zero(a)) fail(ErrorKind::ZeroInverse, "zero has no inverse");
  const std::int64_t q = f.q;
  Poly r0 = f.modulus, r1 = detail::to_power(f, a.coords);
  poly::trim(r1);
  Poly s0{}, s1{1};
  while (!r1.empty()) {
    auto [quot, r2] = poly::divmod(r0, r1, q);
    Poly s2 = poly::sub(s0, poly::mul(quot, s1, q), q);
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 is a nonzero constant since the modulus is irreducible.
  std::int64_t c = inv_mod(r0[0], q);
  Poly inv(f.n, 0);
  for (std::size_t i = 0; i < s0.size() && i < inv.size(); ++i) inv[i] = mul_mod(s0[i], c, q);
  return {detail::from_power(f, inv)};
}

/// Inverse by Fermat: a^(q^n - 2).
inline FieldElem ff_inv_pow(const FieldParams& f, const FieldElem& a) {
  if (ff_is_zero(a)) fail(ErrorKind::ZeroInverse, "zero has no inverse");
  return ff_pow(f, a, static_cast<std::uint64_t>(f.order - 2));
}

/// Column j holds the w-coordinates of z * w_j.
inline MulMatrix mult_matrix(const FieldParams& f, const FieldElem& z) {
  MulMatrix m{Matrix(f.n, std::vector<std::int64_t>(f.n, 0))};
  auto pz = detail::to_power(f, z.coords);
  for (int j = 0; j < f.n; ++j) {
    std::vector<std::int64_t> wj(f.n);
    for (int i = 0; i < f.n; ++i) wj[i] = f.basis[i][j];
    auto col = detail::from_power(f, detail::power_mul(f, pz, wj));
    for (int i = 0; i < f.n; ++i) m.entries[i][j] = col[i];
  }
  return m;
}

inline FieldElem apply(const FieldParams& f, const MulMatrix& m, const FieldElem& x) {
  return {mat_vec_mod(m.entries, x.coords, f.q)};
}

inline std::string describe(const FieldParams& f) {
  std::string s = "F_" + std::to_string(f.q);
  if (f.n > 1) s += "^" + std::to_string(f.n);
  return s;
}

}  // namespace multeq
