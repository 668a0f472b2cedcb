#pragma once

// Boxes in F_{q^n}, generalized arithmetic progressions and Bohr sets in F_q,
// realized as sorted sets of canonical element codes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "multeq/error.hpp"
#include "multeq/ffield.hpp"
#include "multeq/modarith.hpp"
#include "multeq/rational.hpp"

namespace multeq {

struct BoxSpec {
  std::vector<std::int64_t> M;  // offsets
  std::vector<std::int64_t> H;  // side lengths

  /// H_n <= ... <= H_1 <= q.
  bool monotone_H(std::int64_t q) const {
    if (H.empty() || H.front() > q) return false;
    for (std::size_t i = 1; i < H.size(); ++i)
      if (H[i] > H[i - 1]) return false;
    return true;
  }
};

/// {beta + sum alpha_i h_i}; h_i in 1..H, or |h_i| <= range_bound when symmetric.
struct GapSpec {
  std::vector<std::int64_t> alphas;
  std::int64_t H = 1;
  std::int64_t beta = 0;
  bool symmetric = false;
  std::int64_t range_bound = 0;

  int d() const { return static_cast<int>(alphas.size()); }
  std::int64_t low() const { return symmetric ? -range_bound : 1; }
  std::int64_t high() const { return symmetric ? range_bound : H; }

  /// The progression with |h_i| <= bound and no translate.
  GapSpec symmetric_variant(std::int64_t bound) const {
    return GapSpec{alphas, H, 0, true, bound};
  }
};

struct BohrSpec {
  std::vector<std::int64_t> alphas;
  std::vector<Rational> eps;
};

/// Sorted, duplicate-free element codes (FieldElem codes, or residues when
/// n = 1) plus the number of generating tuples, so collapse is visible.
struct ElementSet {
  std::vector<std::int64_t> elements;
  std::uint64_t multiplicity_total = 0;

  std::size_t size() const { return elements.size(); }
  bool contains(std::int64_t code) const { return std::binary_search(elements.begin(), elements.end(), code); }

  static ElementSet from_codes(std::vector<std::int64_t> codes) {
    ElementSet s;
    s.multiplicity_total = codes.size();
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    s.elements = std::move(codes);
    return s;
  }
};

inline ElementSet enumerate_box(const FieldParams& f, const BoxSpec& spec) {
  if (static_cast<int>(spec.M.size()) != f.n || static_cast<int>(spec.H.size()) != f.n)
    fail(ErrorKind::InvalidArgument, "box needs n offsets and n side lengths");
  std::uint64_t total = 1;
  for (auto h : spec.H) {
    if (h < 1) fail(ErrorKind::InvalidArgument, "side lengths must be positive");
    if (h > f.q) fail(ErrorKind::SideExceedsModulus, "side length " + std::to_string(h) + " exceeds q");
    total *= static_cast<std::uint64_t>(h);
  }
  if (total > static_cast<std::uint64_t>(kMaxFieldOrder)) fail(ErrorKind::SetTooLarge, "box exceeds q^n");

  std::vector<std::int64_t> codes;
  codes.reserve(total);
  std::vector<std::int64_t> off(f.n, 0);
  FieldElem x{std::vector<std::int64_t>(f.n)};
  while (true) {
    for (int i = 0; i < f.n; ++i) x.coords[i] = mod(spec.M[i] + 1 + off[i], f.q);
    codes.push_back(ff_code(f, x));
    int i = f.n - 1;
    while (i >= 0 && ++off[i] == spec.H[i]) off[i--] = 0;
    if (i < 0) break;
  }
  return ElementSet::from_codes(std::move(codes));
}

/// Calls visit(tuple, value) for every generating tuple, last coordinate
/// varying fastest.
inline void for_each_gap_tuple(std::int64_t q, const GapSpec& spec,
                               const std::function<bool(const std::vector<std::int64_t>&, std::int64_t)>& visit) {
  if (spec.d() < 1) fail(ErrorKind::InvalidArgument, "GAP rank must be >= 1");
  if (!spec.symmetric && spec.H < 1) fail(ErrorKind::InvalidArgument, "GAP side must be >= 1");
  if (spec.symmetric && spec.range_bound < 0) fail(ErrorKind::InvalidArgument, "negative range bound");
  const int d = spec.d();
  const std::int64_t lo = spec.low(), hi = spec.high();
  std::vector<std::int64_t> alpha(d);
  for (int i = 0; i < d; ++i) alpha[i] = mod(spec.alphas[i], q);
  std::vector<std::int64_t> h(d, lo);
  while (true) {
    std::int64_t v = mod(spec.beta, q);
    for (int i = 0; i < d; ++i) v = (v + alpha[i] * mod(h[i], q)) % q;
    if (!visit(h, v)) return;
    int i = d - 1;
    while (i >= 0 && h[i] == hi) h[i--] = lo;
    if (i < 0) break;
    ++h[i];
  }
}

inline ElementSet enumerate_gap(std::int64_t q, const GapSpec& spec) {
  std::vector<std::int64_t> codes;
  for_each_gap_tuple(q, spec, [&](const auto&, std::int64_t v) {
    codes.push_back(v);
    return true;
  });
  return ElementSet::from_codes(std::move(codes));
}

/// Number of tuples hitting each residue.
inline std::vector<std::uint64_t> gap_multiplicities(std::int64_t q, const GapSpec& spec) {
  std::vector<std::uint64_t> m(q, 0);
  for_each_gap_tuple(q, spec, [&](const auto&, std::int64_t v) {
    ++m[v];
    return true;
  });
  return m;
}

struct ProperResult {
  bool proper = true;
  std::optional<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> witness;
};

inline ProperResult is_proper(std::int64_t q, const GapSpec& spec) {
  std::vector<std::vector<std::int64_t>> first(q);
  std::vector<char> seen(q, 0);
  ProperResult res;
  for_each_gap_tuple(q, spec, [&](const std::vector<std::int64_t>& h, std::int64_t v) {
    if (seen[v]) {
      res.proper = false;
      res.witness = std::pair{first[v], h};
      return false;
    }
    seen[v] = 1;
    first[v] = h;
    return true;
  });
  return res;
}

/// Circle distance ||r/q|| compared exactly: min(r, q-r) * den <= num * q.
inline bool within_circle_distance(std::int64_t r, std::int64_t q, const Rational& eps) {
  std::int64_t dist = std::min(r, q - r);
  return static_cast<i128>(dist) * eps.den() <= static_cast<i128>(eps.num()) * q;
}

inline ElementSet enumerate_bohr(std::int64_t q, const BohrSpec& spec) {
  if (spec.alphas.size() != spec.eps.size()) fail(ErrorKind::InvalidArgument, "alphas and eps differ in length");
  for (const auto& e : spec.eps)
    if (e < Rational(0) || e > Rational(1, 2)) fail(ErrorKind::InvalidArgument, "eps must lie in [0, 1/2]");
  std::vector<std::int64_t> codes;
  for (std::int64_t x = 1; x <= q - 1; ++x) {
    bool in = true;
    for (std::size_t i = 0; i < spec.alphas.size() && in; ++i)
      in = within_circle_distance(mul_mod(spec.alphas[i], x, q), q, spec.eps[i]);
    if (in) codes.push_back(x);
  }
  return ElementSet::from_codes(std::move(codes));
}

struct FourierValue {
  std::complex<double> value;
  double magnitude = 0;
  /// |value| * q / prod_i min(H, 1/(2||alpha_i y / q||)); at most 1.
  double certificate = 0;
};

/// Fourier coefficient (1/q) sum_{a in tuples} e(a y / q) of a non-symmetric
/// GAP via the closed-form geometric sums.
inline FourierValue gap_fourier(std::int64_t q, const GapSpec& spec, std::int64_t y) {
  if (spec.symmetric) fail(ErrorKind::InvalidArgument, "gap_fourier needs ranges 1..H");
  using std::numbers::pi;
  const double H = static_cast<double>(spec.H);
  std::complex<double> value = std::polar(1.0 / static_cast<double>(q),
                                          2 * pi * static_cast<double>(mul_mod(spec.beta, y, q)) / q);
  double bound = 1.0;
  for (auto a : spec.alphas) {
    std::int64_t r = mul_mod(a, y, q);
    if (r == 0) {
      value *= H;
      bound *= H;
      continue;
    }
    double theta = static_cast<double>(r) / static_cast<double>(q);
    double ratio = std::sin(pi * H * theta) / std::sin(pi * theta);
    value *= ratio * std::polar(1.0, pi * (H + 1) * theta);
    double dist = static_cast<double>(std::min(r, q - r)) / static_cast<double>(q);
    bound *= std::min(H, 1.0 / (2 * dist));
  }
  FourierValue out;
  out.value = value;
  out.magnitude = std::abs(value);
  out.certificate = out.magnitude * static_cast<double>(q) / bound;
  return out;
}

}  // namespace multeq
