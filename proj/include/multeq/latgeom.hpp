#pragma once

// Exact lattice geometry at desk scale: the congruence lattices attached to
// boxes and progressions, sup-box and weighted-l1 bodies, dual lattices and
// bodies, successive minima by exhaustive enumeration, and the Minkowski and
// transference certificates.
//
// A lattice is stored as (1/denom) * rowspan(basis) with an integer basis.
// When denom * L contains modulus * Z^dim for a prime modulus, the lattice is
// also described by a congruence u_dep = A u_free (mod modulus); enumeration
// then only walks the free block and lifts the dependent block.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multeq/error.hpp"
#include "multeq/ffield.hpp"
#include "multeq/modarith.hpp"
#include "multeq/rational.hpp"
#include "multeq/structsets.hpp"

namespace multeq {

inline constexpr double kEnumerationBudget = 1e8;

struct CongruenceForm {
  std::int64_t modulus = 1;
  std::vector<int> free_idx;
  std::vector<int> dep_idx;
  Matrix A;  // dep_idx.size() x free_idx.size()
};

struct IntLattice {
  int dim = 0;
  Matrix basis;  // rows are generators of denom * L
  std::int64_t denom = 1;
  Rational det_abs;
  std::optional<CongruenceForm> congruence;
};

enum class BodyKind { SupBox, WeightedL1 };

/// SupBox: weights are half-widths, N(v) = max |v_i| / w_i.
/// WeightedL1: weights are coefficients, N(v) = sum w_i |v_i|.
struct BodySpec {
  BodyKind kind = BodyKind::SupBox;
  std::vector<Rational> weights;
  Rational volume;

  int dim() const { return static_cast<int>(weights.size()); }

  /// Norm of u / denom.
  Rational norm(const std::vector<std::int64_t>& u, std::int64_t denom) const {
    Rational acc(0);
    if (kind == BodyKind::SupBox) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0) continue;
        Rational c = Rational(u[i] < 0 ? -u[i] : u[i]) / weights[i];
        if (c > acc) acc = c;
      }
    } else {
      for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0) acc += weights[i] * Rational(u[i] < 0 ? -u[i] : u[i]);
    }
    return denom == 1 ? acc : acc / Rational(denom);
  }
};

struct MinimaReport {
  std::vector<Rational> minima;
  std::vector<std::vector<std::int64_t>> witnesses;  // numerators over denom
  std::int64_t denom = 1;
  int s_index = 0;  // max{j : lambda_j <= 1}
};

struct MinkowskiCertificate {
  Rational product;       // lambda_1 ... lambda_d * Vol(B) / det
  Rational lower_margin;  // product * d! / 2^d
  Rational upper_margin;  // 2^d / product
};

struct TransferenceCertificate {
  std::vector<Rational> products;  // lambda_j * lambda*_{d-j+1}
  Rational max_product;
};

// ---------------------------------------------------------------------------
// Bodies

inline Rational factorial(int d) {
  Rational r(1);
  for (int i = 2; i <= d; ++i) r *= Rational(i);
  return r;
}

inline BodySpec make_sup_box(std::vector<Rational> weights) {
  BodySpec b{BodyKind::SupBox, std::move(weights), Rational(1)};
  for (const auto& w : b.weights) {
    if (w <= Rational(0)) fail(ErrorKind::InvalidArgument, "body weights must be positive");
    b.volume *= Rational(2) * w;
  }
  return b;
}

inline BodySpec make_weighted_l1(std::vector<Rational> coeffs) {
  BodySpec b{BodyKind::WeightedL1, std::move(coeffs), Rational(1)};
  Rational prod(1);
  for (const auto& c : b.weights) {
    if (c <= Rational(0)) fail(ErrorKind::InvalidArgument, "body weights must be positive");
    prod *= c;
  }
  b.volume = pow(Rational(2), static_cast<unsigned>(b.dim())) / (factorial(b.dim()) * prod);
  return b;
}

/// Polar body: SupBox(w) <-> WeightedL1(w).
inline BodySpec dual_body(const BodySpec& b) {
  return b.kind == BodyKind::SupBox ? make_weighted_l1(b.weights) : make_sup_box(b.weights);
}

// ---------------------------------------------------------------------------
// Exact linear algebra over Q for small dense matrices

namespace detail {

using QMatrix = std::vector<std::vector<Rational>>;

inline QMatrix to_q(const Matrix& m) {
  QMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (auto x : m[i]) out[i].emplace_back(x);
  return out;
}

/// Determinant and inverse by Gauss-Jordan over Q. Returns nullopt when singular.
inline std::optional<std::pair<Rational, QMatrix>> det_inverse(const Matrix& m) {
  const std::size_t n = m.size();
  QMatrix a = to_q(m);
  QMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Rational(1);
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == Rational(0)) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(inv[piv], inv[col]);
      det = -det;
    }
    Rational p = a[col][col];
    det *= p;
    Rational s = p.reciprocal();
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] *= s;
      inv[col][j] *= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == Rational(0)) continue;
      Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return std::pair{det, inv};
}

inline std::int64_t lcm_den(std::int64_t acc, const Rational& r) { return std::lcm(acc, r.den()); }

/// Incremental rank tracker over Q using fraction-free integer rows.
class IndependenceTracker {
 public:
  explicit IndependenceTracker(int dim) : dim_(dim) {}

  /// Adds v when it is independent of the rows seen so far.
  bool try_add(const std::vector<std::int64_t>& v) {
    std::vector<i128> w(v.begin(), v.end());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int p = pivots_[r];
      if (w[p] == 0) continue;
      i128 a = rows_[r][p], b = w[p];
      for (int j = 0; j < dim_; ++j) w[j] = w[j] * a - rows_[r][j] * b;
      normalize(w);
    }
    int p = 0;
    while (p < dim_ && w[p] == 0) ++p;
    if (p == dim_) return false;
    rows_.push_back(std::move(w));
    pivots_.push_back(p);
    return true;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  static void normalize(std::vector<i128>& w) {
    i128 g = 0;
    for (auto x : w) g = detail::gcd128(g, x);
    if (g > 1)
      for (auto& x : w) x /= g;
  }

  int dim_;
  std::vector<std::vector<i128>> rows_;
  std::vector<int> pivots_;
};

}  // namespace detail

inline Rational det_abs_of(const Matrix& basis, std::int64_t denom) {
  auto di = detail::det_inverse(basis);
  if (!di) fail(ErrorKind::SingularBasis, "lattice basis is singular");
  return di->first.abs() / pow(Rational(denom), static_cast<unsigned>(basis.size()));
}

/// Recovers the congruence description of denom*L when its exponent in
/// Z^dim is prime (or 1); nullopt otherwise.
inline std::optional<CongruenceForm> detect_congruence(const IntLattice& L) {
  auto di = detail::det_inverse(L.basis);
  if (!di) fail(ErrorKind::SingularBasis, "lattice basis is singular");
  std::int64_t m = 1;
  for (const auto& row : di->second)
    for (const auto& x : row) m = detail::lcm_den(m, x);
  CongruenceForm form;
  form.modulus = m;
  if (m == 1) {
    for (int i = 0; i < L.dim; ++i) form.free_idx.push_back(i);
    return form;
  }
  if (!is_prime(m)) return std::nullopt;

  // Row-reduce the basis mod m; pivot columns are free, the rest dependent.
  Matrix a = L.basis;
  for (auto& row : a)
    for (auto& x : row) x = mod(x, m);
  std::vector<int> pivots;
  std::size_t rank = 0;
  for (int col = 0; col < L.dim && rank < a.size(); ++col) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][col] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    std::int64_t s = inv_mod(a[rank][col], m);
    for (auto& x : a[rank]) x = mul_mod(x, s, m);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || a[r][col] == 0) continue;
      std::int64_t f = a[r][col];
      for (int j = 0; j < L.dim; ++j) a[r][j] = mod(a[r][j] - mul_mod(f, a[rank][j], m), m);
    }
    pivots.push_back(col);
    ++rank;
  }
  form.free_idx = pivots;
  for (int j = 0; j < L.dim; ++j)
    if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) form.dep_idx.push_back(j);
  form.A.assign(form.dep_idx.size(), std::vector<std::int64_t>(pivots.size(), 0));
  for (std::size_t dj = 0; dj < form.dep_idx.size(); ++dj)
    for (std::size_t k = 0; k < pivots.size(); ++k) form.A[dj][k] = a[k][form.dep_idx[dj]];
  return form;
}

/// Lattice {u : u_dep = A u_free (mod q)} scaled by 1/denom, with the
/// block basis rows (e_i | A e_i) and (0 | q e_j).
inline IntLattice congruence_lattice(CongruenceForm form, std::int64_t denom = 1) {
  IntLattice L;
  L.dim = static_cast<int>(form.free_idx.size() + form.dep_idx.size());
  L.denom = denom;
  for (std::size_t k = 0; k < form.free_idx.size(); ++k) {
    std::vector<std::int64_t> row(L.dim, 0);
    row[form.free_idx[k]] = 1;
    for (std::size_t j = 0; j < form.dep_idx.size(); ++j) row[form.dep_idx[j]] = mod(form.A[j][k], form.modulus);
    L.basis.push_back(std::move(row));
  }
  for (int dj : form.dep_idx) {
    std::vector<std::int64_t> row(L.dim, 0);
    row[dj] = form.modulus;
    L.basis.push_back(std::move(row));
  }
  L.det_abs = det_abs_of(L.basis, denom);
  L.congruence = std::move(form);
  return L;
}

/// Whether u / d lies in L.
inline bool contains(const IntLattice& L, const std::vector<std::int64_t>& u, std::int64_t d = 1) {
  auto di = detail::det_inverse(L.basis);
  if (!di) fail(ErrorKind::SingularBasis, "lattice basis is singular");
  // coefficients k = (u/d) * denom * basis^{-1}
  for (int j = 0; j < L.dim; ++j) {
    Rational k(0);
    for (int i = 0; i < L.dim; ++i)
      if (u[i] != 0) k += Rational(u[i]) * di->second[i][j];
    k = k * Rational(L.denom, d);
    if (!k.is_integer()) return false;
  }
  return true;
}

inline bool same_lattice(const IntLattice& a, const IntLattice& b) {
  if (a.dim != b.dim) return false;
  for (const auto& row : a.basis)
    if (!contains(b, row, a.denom)) return false;
  for (const auto& row : b.basis)
    if (!contains(a, row, b.denom)) return false;
  return true;
}

/// Dual lattice from the exact inverse transpose, reduced to an integer basis
/// over a common denominator; pairing integrality is verified.
inline IntLattice dual_lattice(const IntLattice& L) {
  auto di = detail::det_inverse(L.basis);
  if (!di) fail(ErrorKind::SingularBasis, "lattice basis is singular");
  const auto& inv = di->second;
  // Dual generators: rows of denom * (basis^{-1})^T.
  std::int64_t common = 1;
  for (const auto& row : inv)
    for (const auto& x : row) common = detail::lcm_den(common, x * Rational(L.denom));
  IntLattice D;
  D.dim = L.dim;
  D.basis.assign(L.dim, std::vector<std::int64_t>(L.dim, 0));
  std::int64_t g = common;
  for (int i = 0; i < L.dim; ++i)
    for (int j = 0; j < L.dim; ++j) {
      Rational v = inv[j][i] * Rational(L.denom) * Rational(common);
      D.basis[i][j] = v.num();
      g = std::gcd(g, v.num());
    }
  if (g > 1) {
    for (auto& row : D.basis)
      for (auto& x : row) x /= g;
    common /= g;
  }
  D.denom = common;
  D.det_abs = L.det_abs.reciprocal();

  for (const auto& b : L.basis)
    for (const auto& c : D.basis) {
      i128 dot = 0;
      for (int k = 0; k < L.dim; ++k) dot += static_cast<i128>(b[k]) * c[k];
      if (dot % (static_cast<i128>(L.denom) * D.denom) != 0)
        fail(ErrorKind::InternalError, "dual pairing is not integral");
    }
  D.congruence = detect_congruence(D);
  return D;
}

// ---------------------------------------------------------------------------
// Lattice families

/// Gamma(z) = {(x, y) in Z^{2n} : z (w.x) = w.y} with the box |x_i|, |y_i| <= H_i.
inline std::pair<IntLattice, BodySpec> gamma_box(const FieldParams& f, const FieldElem& z,
                                                 const std::vector<std::int64_t>& H) {
  if (static_cast<int>(H.size()) != f.n) fail(ErrorKind::InvalidArgument, "need n side lengths");
  CongruenceForm form;
  form.modulus = f.q;
  for (int i = 0; i < f.n; ++i) {
    form.free_idx.push_back(i);
    form.dep_idx.push_back(f.n + i);
  }
  form.A = mult_matrix(f, z).entries;
  IntLattice L = congruence_lattice(std::move(form));
  std::vector<Rational> w;
  for (int rep = 0; rep < 2; ++rep)
    for (auto h : H) w.emplace_back(h);
  return {std::move(L), make_sup_box(std::move(w))};
}

/// Gamma(w) for a progression: pairs (h, y) with y = alpha * b and
/// b = w^{-1} <alpha, h> (mod q); body |t_j| <= H, |s_j| <= delta_j q / H.
inline std::pair<IntLattice, BodySpec> gamma_gap(std::int64_t q, const GapSpec& spec, std::int64_t w,
                                                 const std::vector<Rational>& deltas = {}) {
  const int d = spec.d();
  if (mod(w, q) == 0) fail(ErrorKind::DegenerateOmega, "omega must be nonzero mod q");
  if (q <= d) fail(ErrorKind::RankExceedsModulus, "q must exceed the rank d");
  for (auto a : spec.alphas)
    if (mod(a, q) == 0) fail(ErrorKind::InvalidArgument, "alphas must be nonzero mod q");
  std::int64_t w_inv = inv_mod(w, q);
  CongruenceForm form;
  form.modulus = q;
  for (int i = 0; i < d; ++i) {
    form.free_idx.push_back(i);
    form.dep_idx.push_back(d + i);
  }
  form.A.assign(d, std::vector<std::int64_t>(d, 0));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) form.A[j][i] = mul_mod(w_inv, mul_mod(spec.alphas[i], spec.alphas[j], q), q);
  IntLattice L = congruence_lattice(std::move(form));
  std::vector<Rational> wts(d, Rational(spec.H));
  for (int j = 0; j < d; ++j) {
    Rational delta = deltas.empty() ? Rational(1) : deltas.at(j);
    wts.push_back(delta * Rational(q) / Rational(spec.H));
  }
  return {std::move(L), make_sup_box(std::move(wts))};
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

/// Coordinate bounds |u_i| <= b_i implied by N(u/denom) <= R.
inline std::vector<std::int64_t> coordinate_bounds(const BodySpec& B, std::int64_t denom, const Rational& R) {
  std::vector<std::int64_t> b(B.dim());
  for (int i = 0; i < B.dim(); ++i) {
    Rational lim = B.kind == BodyKind::SupBox ? R * Rational(denom) * B.weights[i]
                                               : R * Rational(denom) / B.weights[i];
    b[i] = lim.floor();
  }
  return b;
}

inline double box_count(const std::vector<std::int64_t>& bounds, const std::vector<int>& idx) {
  double c = 1;
  for (int i : idx) c *= static_cast<double>(2 * bounds[i] + 1);
  return c;
}

/// Visits every lattice numerator u (including 0) with N(u/denom) <= R.
template <class Visit>
void for_each_point(const IntLattice& L, const BodySpec& B, const Rational& R, Visit&& visit) {
  if (B.dim() != L.dim) fail(ErrorKind::InvalidArgument, "body and lattice dimensions differ");
  if (R < Rational(0)) return;
  const auto bounds = coordinate_bounds(B, L.denom, R);
  std::vector<std::int64_t> u(L.dim, 0);

  std::optional<CongruenceForm> form = L.congruence;
  if (!form) form = detect_congruence(L);

  if (form) {
    const auto& fi = form->free_idx;
    const auto& dj = form->dep_idx;
    const std::int64_t m = form->modulus;
    if (box_count(bounds, fi) > kEnumerationBudget) fail(ErrorKind::BudgetExceeded, "enumeration budget exceeded");
    std::vector<std::vector<std::int64_t>> cand(dj.size());
    std::vector<std::size_t> pick(dj.size());
    std::vector<std::int64_t> fv(fi.size());
    for (std::size_t k = 0; k < fi.size(); ++k) fv[k] = -bounds[fi[k]];
    while (true) {
      for (std::size_t k = 0; k < fi.size(); ++k) u[fi[k]] = fv[k];
      bool empty = false;
      for (std::size_t j = 0; j < dj.size() && !empty; ++j) {
        i128 acc = 0;
        for (std::size_t k = 0; k < fi.size(); ++k) acc += static_cast<i128>(form->A[j][k]) * fv[k];
        std::int64_t r = static_cast<std::int64_t>(((acc % m) + m) % m);
        std::int64_t b = bounds[dj[j]];
        // smallest value >= -b congruent to r
        std::int64_t start = r - m * ((r + b) / m);
        cand[j].clear();
        for (std::int64_t v = start; v <= b; v += m) cand[j].push_back(v);
        empty = cand[j].empty();
        pick[j] = 0;
      }
      if (!empty) {
        while (true) {
          for (std::size_t j = 0; j < dj.size(); ++j) u[dj[j]] = cand[j][pick[j]];
          if (B.norm(u, L.denom) <= R) visit(u);
          std::size_t j = 0;
          while (j < dj.size() && ++pick[j] == cand[j].size()) pick[j++] = 0;
          if (j == dj.size()) break;
        }
      }
      std::size_t k = 0;
      while (k < fi.size() && fv[k] == bounds[fi[k]]) {
        fv[k] = -bounds[fi[k]];
        ++k;
      }
      if (k == fi.size()) break;
      ++fv[k];
    }
    return;
  }

  // Generic route: enumerate coefficient vectors c with u = c * basis.
  auto di = det_inverse(L.basis);
  if (!di) fail(ErrorKind::SingularBasis, "lattice basis is singular");
  std::vector<std::int64_t> cb(L.dim);
  double total = 1;
  for (int j = 0; j < L.dim; ++j) {
    Rational s(0);
    for (int i = 0; i < L.dim; ++i) s += Rational(bounds[i]) * di->second[i][j].abs();
    cb[j] = s.floor();
    total *= static_cast<double>(2 * cb[j] + 1);
  }
  if (total > kEnumerationBudget) fail(ErrorKind::BudgetExceeded, "enumeration budget exceeded");
  std::vector<std::int64_t> c(L.dim);
  for (int j = 0; j < L.dim; ++j) c[j] = -cb[j];
  while (true) {
    bool inside = true;
    for (int i = 0; i < L.dim && inside; ++i) {
      i128 acc = 0;
      for (int j = 0; j < L.dim; ++j) acc += static_cast<i128>(c[j]) * L.basis[j][i];
      if (acc > bounds[i] || acc < -bounds[i]) inside = false;
      u[i] = static_cast<std::int64_t>(acc);
    }
    if (inside && B.norm(u, L.denom) <= R) visit(u);
    int k = 0;
    while (k < L.dim && c[k] == cb[k]) {
      c[k] = -cb[k];
      ++k;
    }
    if (k == L.dim) break;
    ++c[k];
  }
}

}  // namespace detail

/// |L cap R*B|, origin included.
inline std::uint64_t lattice_point_count(const IntLattice& L, const BodySpec& B, const Rational& R) {
  std::uint64_t count = 0;
  detail::for_each_point(L, B, R, [&](const std::vector<std::int64_t>&) { ++count; });
  return count;
}

/// Radius at which the canonical generators already give dim independent vectors.
inline Rational default_radius(const IntLattice& L, const BodySpec& B) {
  Rational r(0);
  auto consider = [&](const std::vector<std::int64_t>& u) { r = max(r, B.norm(u, L.denom)); };
  std::optional<CongruenceForm> form = L.congruence;
  if (!form) form = detect_congruence(L);
  if (form) {
    std::vector<std::int64_t> u(L.dim, 0);
    for (std::size_t k = 0; k < form->free_idx.size(); ++k) {
      std::fill(u.begin(), u.end(), 0);
      u[form->free_idx[k]] = 1;
      for (std::size_t j = 0; j < form->dep_idx.size(); ++j)
        u[form->dep_idx[j]] = centered(form->A[j][k], form->modulus);
      consider(u);
    }
    for (int dj : form->dep_idx) {
      std::fill(u.begin(), u.end(), 0);
      u[dj] = form->modulus;
      consider(u);
    }
  } else {
    for (const auto& row : L.basis) consider(row);
  }
  return r;
}

/// Exact successive minima of L with respect to B. Points up to a radius are
/// enumerated exhaustively, sorted by norm with a deterministic tie order, and a maximal
/// independent chain is picked greedily; the radius doubles from a Minkowski
/// guess up to R_max until dim independent vectors appear.
inline MinimaReport successive_minima(const IntLattice& L, const BodySpec& B, const Rational& R_max) {
  if (R_max <= Rational(0)) fail(ErrorKind::InvalidArgument, "R_max must be positive");
  const int dim = L.dim;
  double guess = std::pow((L.det_abs / B.volume).to_double(), 1.0 / dim);
  Rational R = R_max;
  for (int k = 0; k < 30 && (R / Rational(2)).to_double() >= guess / 2; ++k) R = R / Rational(2);

  while (true) {
    std::vector<std::int64_t> flat;
    std::vector<Rational> norms;
    detail::for_each_point(L, B, R, [&](const std::vector<std::int64_t>& u) {
      // One representative per +-u: first nonzero coordinate positive.
      auto lead = std::find_if(u.begin(), u.end(), [](std::int64_t x) { return x != 0; });
      if (lead == u.end() || *lead < 0) return;
      flat.insert(flat.end(), u.begin(), u.end());
      norms.push_back(B.norm(u, L.denom));
    });
    std::vector<std::size_t> order(norms.size());
    std::iota(order.begin(), order.end(), 0);
    // Ties: smaller l1 length of the numerator, then earlier leading
    // coordinate, then lexicographic. Coordinate vectors come out as e_1, e_2, ...
    auto l1 = [&](std::size_t k) {
      std::int64_t s = 0;
      for (int i = 0; i < dim; ++i) s += std::abs(flat[k * dim + i]);
      return s;
    };
    auto lead_idx = [&](std::size_t k) {
      int i = 0;
      while (flat[k * dim + i] == 0) ++i;
      return i;
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (norms[a] != norms[b]) return norms[a] < norms[b];
      if (l1(a) != l1(b)) return l1(a) < l1(b);
      if (lead_idx(a) != lead_idx(b)) return lead_idx(a) < lead_idx(b);
      return std::lexicographical_compare(flat.begin() + a * dim, flat.begin() + (a + 1) * dim,
                                          flat.begin() + b * dim, flat.begin() + (b + 1) * dim);
    });
    detail::IndependenceTracker tracker(dim);
    MinimaReport rep;
    rep.denom = L.denom;
    for (std::size_t idx : order) {
      std::vector<std::int64_t> u(flat.begin() + idx * dim, flat.begin() + (idx + 1) * dim);
      if (tracker.try_add(u)) {
        rep.minima.push_back(norms[idx]);
        rep.witnesses.push_back(std::move(u));
        if (tracker.rank() == dim) break;
      }
    }
    if (tracker.rank() == dim) {
      for (int j = 0; j < dim; ++j)
        if (rep.minima[j] <= Rational(1)) rep.s_index = j + 1;
      return rep;
    }
    if (R >= R_max)
      fail(ErrorKind::RadiusTooSmall,
           "found " + std::to_string(tracker.rank()) + " of " + std::to_string(dim) + " independent vectors");
    R = min(R * Rational(2), R_max);
  }
}

inline MinimaReport successive_minima(const IntLattice& L, const BodySpec& B) {
  return successive_minima(L, B, default_radius(L, B));
}

inline MinkowskiCertificate minkowski_certificate(const MinimaReport& rep, const BodySpec& B, const IntLattice& L) {
  const int d = L.dim;
  if (static_cast<int>(rep.minima.size()) != d) fail(ErrorKind::InvalidArgument, "incomplete minima report");
  Rational prod(1);
  for (const auto& l : rep.minima) prod *= l;
  MinkowskiCertificate cert;
  cert.product = prod * B.volume / L.det_abs;
  Rational two_d = pow(Rational(2), static_cast<unsigned>(d));
  cert.lower_margin = cert.product * factorial(d) / two_d;
  cert.upper_margin = two_d / cert.product;
  if (cert.lower_margin < Rational(1) || cert.upper_margin < Rational(1))
    fail(ErrorKind::CertificateViolation, "Minkowski product " + cert.product.str() + " outside [2^d/d!, 2^d]");
  return cert;
}

inline TransferenceCertificate transference_certificate(const MinimaReport& rep, const MinimaReport& rep_dual) {
  const std::size_t d = rep.minima.size();
  if (rep_dual.minima.size() != d) fail(ErrorKind::InvalidArgument, "primal and dual dimensions differ");
  TransferenceCertificate cert;
  cert.max_product = Rational(0);
  for (std::size_t j = 0; j < d; ++j) {
    Rational p = rep.minima[j] * rep_dual.minima[d - 1 - j];
    if (p < Rational(1))
      fail(ErrorKind::CertificateViolation, "transference product " + p.str() + " < 1 at j=" + std::to_string(j + 1));
    cert.products.push_back(p);
    cert.max_product = max(cert.max_product, p);
  }
  return cert;
}

/// |L cap B| / prod_j max(1, 1/lambda_j).
inline Rational lattice_count_ratio(std::uint64_t count, const MinimaReport& rep) {
  Rational denom(1);
  for (const auto& l : rep.minima)
    if (l < Rational(1)) denom *= l.reciprocal();
  return Rational(static_cast<std::int64_t>(count)) / denom;
}

}  // namespace multeq
