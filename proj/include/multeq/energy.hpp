#pragma once

// Exact multiplicative energy, ratio counts I(z), mixed energy against Bohr
// sets, and product-set statistics.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "multeq/error.hpp"
#include "multeq/ffield.hpp"
#include "multeq/structsets.hpp"

namespace multeq {

inline constexpr std::size_t kMaxEnergySet = 100000;
inline constexpr std::uint64_t kMaxMixedPairs = 10000000;

using Histogram = std::vector<std::pair<std::int64_t, std::uint64_t>>;

struct EnergyReport {
  std::uint64_t E = 0;
  std::uint64_t set_size = 0;
  Histogram r_hist;  // lambda -> #{(a,b): ab = lambda}, sorted by code
  std::uint64_t zero_count = 0;
  std::optional<Histogram> I_hist;  // z -> #{(a,b): a = z b}, only when 0 not in A
};

struct MixedEnergyReport {
  std::uint64_t value = 0;
};

struct ProductSetReport {
  std::uint64_t set_size = 0;
  std::uint64_t product_set_size = 0;
  std::uint64_t energy = 0;
  /// |AA| * E(A) >= |A|^4
  bool cauchy_schwarz_holds = false;
};

struct TranslateReport {
  std::uint64_t E_translated = 0;
  std::uint64_t E_symmetric = 0;
  std::uint64_t set_size = 0;
  /// E(A + beta) <= E(A_0) + |A|^2
  bool inequality_holds = false;
};

namespace detail {

/// Codes of products a*b for a fixed a against every b in `others`.
class ProductTable {
 public:
  ProductTable(const FieldParams& f, const std::vector<std::int64_t>& codes) : f_(f) {
    coords_.reserve(codes.size());
    for (auto c : codes) coords_.push_back(ff_from_code(f, c).coords);
  }

  template <class Visit>
  void for_each_product(std::int64_t a_code, Visit&& visit) const {
    const int n = f_.n;
    const std::int64_t q = f_.q;
    MulMatrix m = mult_matrix(f_, ff_from_code(f_, a_code));
    for (const auto& b : coords_) {
      std::int64_t code = 0;
      for (int i = n - 1; i >= 0; --i) {
        std::int64_t acc = 0;
        for (int j = 0; j < n; ++j) acc += m.entries[i][j] * b[j];
        code = code * q + acc % q;
      }
      visit(code);
    }
  }

 private:
  const FieldParams& f_;
  std::vector<std::vector<std::int64_t>> coords_;
};

inline Histogram sparse(const std::vector<std::uint64_t>& dense) {
  Histogram h;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0) h.emplace_back(static_cast<std::int64_t>(i), dense[i]);
  return h;
}

inline std::uint64_t sum_squares(const std::vector<std::uint64_t>& dense) {
  std::uint64_t s = 0;
  for (auto c : dense) s += c * c;
  return s;
}

}  // namespace detail

inline EnergyReport mult_energy(const FieldParams& f, const ElementSet& A) {
  if (A.size() > kMaxEnergySet) fail(ErrorKind::SetTooLarge, "energy set exceeds 1e5 elements");
  EnergyReport rep;
  rep.set_size = A.size();
  std::vector<std::uint64_t> r(f.order, 0);
  detail::ProductTable table(f, A.elements);
  for (auto a : A.elements) table.for_each_product(a, [&](std::int64_t code) { ++r[code]; });
  rep.E = detail::sum_squares(r);
  rep.zero_count = r[0];
  rep.r_hist = detail::sparse(r);

  if (!A.contains(0)) {
    std::vector<std::int64_t> inverses;
    inverses.reserve(A.size());
    for (auto b : A.elements) inverses.push_back(ff_code(f, ff_inv(f, ff_from_code(f, b))));
    std::vector<std::uint64_t> ratio(f.order, 0);
    detail::ProductTable inv_table(f, inverses);
    for (auto a : A.elements) inv_table.for_each_product(a, [&](std::int64_t code) { ++ratio[code]; });
    if (detail::sum_squares(ratio) != rep.E)
      fail(ErrorKind::InternalError, "ratio-count energy disagrees with product histogram");
    rep.I_hist = detail::sparse(ratio);
  }
  return rep;
}

/// #{(a1,a2,b1,b2): a1 b1 = a2 b2 mod q}.
inline MixedEnergyReport mixed_energy(std::int64_t q, const ElementSet& A, const ElementSet& B) {
  if (static_cast<std::uint64_t>(A.size()) * B.size() > kMaxMixedPairs)
    fail(ErrorKind::SetTooLarge, "|A||B| exceeds 1e7");
  std::vector<std::uint64_t> hist(q, 0);
  for (auto a : A.elements)
    for (auto b : B.elements) ++hist[(a % q) * (b % q) % q];
  return {detail::sum_squares(hist)};
}

inline ProductSetReport product_set(const FieldParams& f, const ElementSet& A) {
  ProductSetReport rep;
  EnergyReport e = mult_energy(f, A);
  rep.set_size = A.size();
  rep.product_set_size = e.r_hist.size();
  rep.energy = e.E;
  unsigned __int128 n = rep.set_size;
  rep.cauchy_schwarz_holds =
      static_cast<unsigned __int128>(rep.product_set_size) * rep.energy >= n * n * n * n;
  return rep;
}

/// Energy of the beta-translate of a GAP against the symmetric progression
/// {sum alpha_i h_i : |h_i| <= H}.
inline TranslateReport energy_translate(std::int64_t q, const GapSpec& spec, std::int64_t beta) {
  FieldParams fq = make_field(q, 1);
  GapSpec shifted = spec;
  shifted.symmetric = false;
  shifted.beta = beta;
  ElementSet A = enumerate_gap(q, shifted);
  ElementSet A0 = enumerate_gap(q, spec.symmetric_variant(spec.H));
  TranslateReport rep;
  rep.set_size = A.size();
  rep.E_translated = mult_energy(fq, A).E;
  rep.E_symmetric = mult_energy(fq, A0).E;
  rep.inequality_holds = rep.E_translated <= rep.E_symmetric + rep.set_size * rep.set_size;
  return rep;
}

}  // namespace multeq
