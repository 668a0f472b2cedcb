#include <gtest/gtest.h>

#include <random>

#include "multeq/latgeom.hpp"
#include "oracles.hpp"

using namespace multeq;

namespace {

IntLattice from_basis(Matrix basis, std::int64_t denom = 1) {
  IntLattice L;
  L.dim = static_cast<int>(basis.size());
  L.basis = std::move(basis);
  L.denom = denom;
  L.det_abs = det_abs_of(L.basis, denom);
  L.congruence = detect_congruence(L);
  return L;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalError;
}

// Power-basis Gamma(z) membership: y = z * x as polynomials mod f.
bool gamma_member(const FieldParams& f, const oracle::Vec& zc, const oracle::Vec& u) {
  oracle::Vec x(u.begin(), u.begin() + f.n), y(u.begin() + f.n, u.end());
  for (auto& v : x) v = oracle::md(v, f.q);
  oracle::Vec p = oracle::poly_mulmod(zc, x, f.modulus, f.q);
  for (int i = 0; i < f.n; ++i)
    if (oracle::md(y[i] - p[i], f.q) != 0) return false;
  return true;
}

// v/q lies in the dual iff v pairs to 0 mod q with every (e_i | z t^{i-1}).
bool gamma_dual_member(const FieldParams& f, const oracle::Vec& zc, const oracle::Vec& v) {
  for (int i = 0; i < f.n; ++i) {
    oracle::Vec e(f.n, 0);
    e[i] = 1;
    oracle::Vec g = oracle::poly_mulmod(zc, e, f.modulus, f.q);
    std::int64_t dot = v[i];
    for (int j = 0; j < f.n; ++j) dot += v[f.n + j] * g[j];
    if (oracle::md(dot, f.q) != 0) return false;
  }
  return true;
}

Rational sup_norm(const oracle::Vec& u, const std::vector<std::int64_t>& H) {
  Rational r(0);
  for (std::size_t i = 0; i < u.size(); ++i) r = max(r, Rational(std::abs(u[i]), H[i % H.size()]));
  return r;
}

}  // namespace

TEST(GammaBox, Examples) {
  FieldParams f = make_field(5, 1);
  auto [L, B] = gamma_box(f, ff_from_code(f, 2), {2});
  EXPECT_TRUE(contains(L, {1, 2}));
  EXPECT_FALSE(contains(L, {1, 1}));
  EXPECT_EQ(L.det_abs, Rational(5));
  EXPECT_EQ(B.kind, BodyKind::SupBox);
  EXPECT_EQ(B.weights, (std::vector<Rational>{Rational(2), Rational(2)}));

  auto [Z, BZ] = gamma_box(f, ff_zero(f), {2});
  EXPECT_TRUE(same_lattice(Z, from_basis({{1, 0}, {0, 5}})));
}

TEST(GammaBox, DeterminantLaw) {
  for (auto [q, n] : std::vector<std::pair<std::int64_t, int>>{{5, 1}, {7, 1}, {3, 2}, {5, 2}, {2, 3}}) {
    FieldParams f = make_field(q, n);
    Rational qn = pow(Rational(q), static_cast<unsigned>(n));
    for (std::int64_t c = 0; c < f.order; ++c)
      EXPECT_EQ(gamma_box(f, ff_from_code(f, c), std::vector<std::int64_t>(n, 1)).first.det_abs, qn);
  }
}

TEST(GammaGap, Examples) {
  auto [L, B] = gamma_gap(7, GapSpec{{1}, 3}, 1);
  EXPECT_EQ(L.basis, (Matrix{{1, 1}, {0, 7}}));
  EXPECT_EQ(L.det_abs, Rational(7));
  EXPECT_EQ(B.weights, (std::vector<Rational>{Rational(3), Rational(7, 3)}));

  auto [L2, B2] = gamma_gap(7, GapSpec{{1, 3}, 2}, 2);
  EXPECT_TRUE(contains(L2, {1, 0, 4, 5}));
  EXPECT_FALSE(contains(L2, {1, 0, 4, 4}));
}

TEST(GammaGap, DeterminantLawAndMembership) {
  const std::int64_t q = 11;
  GapSpec s{{2, 7}, 3};
  for (std::int64_t w = 1; w < q; ++w) {
    auto [L, B] = gamma_gap(q, s, w);
    EXPECT_EQ(L.det_abs, Rational(q * q));
    std::int64_t winv = inv_mod(w, q);
    for (std::int64_t h1 = -2; h1 <= 2; ++h1)
      for (std::int64_t h2 = -2; h2 <= 2; ++h2) {
        std::int64_t b = oracle::md(winv * (2 * h1 + 7 * h2), q);
        EXPECT_TRUE(contains(L, {h1, h2, oracle::md(2 * b, q), oracle::md(7 * b, q)}));
        EXPECT_FALSE(contains(L, {h1, h2, oracle::md(2 * b + 1, q), oracle::md(7 * b, q)}));
      }
  }
}

TEST(GammaGap, Errors) {
  EXPECT_EQ(kind_of([] { gamma_gap(7, GapSpec{{1}, 2}, 0); }), ErrorKind::DegenerateOmega);
  EXPECT_EQ(kind_of([] { gamma_gap(2, GapSpec{{1, 1}, 2}, 1); }), ErrorKind::RankExceedsModulus);
}

TEST(Dual, Examples) {
  IntLattice Z2 = from_basis({{1, 0}, {0, 1}});
  EXPECT_TRUE(same_lattice(dual_lattice(Z2), Z2));

  IntLattice L = from_basis({{1, 2}, {0, 5}});
  IntLattice D = dual_lattice(L);
  EXPECT_TRUE(contains(D, {-2, 1}, 5));
  EXPECT_FALSE(contains(D, {1, 1}, 5));
  EXPECT_EQ(D.det_abs, Rational(1, 5));
  // (1/5){(t,s): t + 2s = 0 mod 5}
  for (std::int64_t t = -6; t <= 6; ++t)
    for (std::int64_t s = -6; s <= 6; ++s) EXPECT_EQ(contains(D, {t, s}, 5), oracle::md(t + 2 * s, 5) == 0);
}

TEST(Dual, InvolutionAndPairing) {
  std::mt19937_64 rng(9);
  FieldParams f = make_field(7, 2);
  for (int t = 0; t < 10; ++t) {
    auto [L, B] = gamma_box(f, ff_from_code(f, static_cast<std::int64_t>(rng() % f.order)), {2, 2});
    IntLattice D = dual_lattice(L);
    EXPECT_TRUE(same_lattice(dual_lattice(D), L));
    for (const auto& b : L.basis)
      for (const auto& c : D.basis) {
        std::int64_t dot = 0;
        for (int k = 0; k < L.dim; ++k) dot += b[k] * c[k];
        EXPECT_EQ(dot % (L.denom * D.denom), 0);
      }
  }
  EXPECT_EQ(kind_of([] { dual_lattice(from_basis({{1, 2}, {2, 4}})); }), ErrorKind::SingularBasis);
}

TEST(DualBody, Examples) {
  BodySpec cube = make_sup_box({Rational(1), Rational(1)});
  BodySpec l1 = dual_body(cube);
  EXPECT_EQ(l1.kind, BodyKind::WeightedL1);
  EXPECT_EQ(l1.volume, Rational(2));
  EXPECT_EQ(l1.norm({1, -1}, 1), Rational(2));

  // sum H_i |t_i| + sum H_i |s_i| <= 1
  BodySpec box = make_sup_box({Rational(3), Rational(2), Rational(3), Rational(2)});
  BodySpec star = dual_body(box);
  EXPECT_EQ(star.norm({1, -2, 0, 1}, 7), Rational(3 + 4 + 2, 7));

  for (const BodySpec& b : {cube, l1, box, star}) {
    BodySpec bb = dual_body(dual_body(b));
    EXPECT_EQ(bb.kind, b.kind);
    EXPECT_EQ(bb.weights, b.weights);
    EXPECT_EQ(bb.volume, b.volume);
  }
}

TEST(Minima, Examples) {
  BodySpec unit = make_sup_box({Rational(1), Rational(1)});
  MinimaReport z2 = successive_minima(from_basis({{1, 0}, {0, 1}}), unit);
  EXPECT_EQ(z2.minima, (std::vector<Rational>{Rational(1), Rational(1)}));
  EXPECT_EQ(z2.witnesses, (std::vector<std::vector<std::int64_t>>{{1, 0}, {0, 1}}));

  IntLattice L = from_basis({{1, 2}, {0, 5}});
  BodySpec B = make_sup_box({Rational(2), Rational(2)});
  MinimaReport r = successive_minima(L, B);
  EXPECT_EQ(r.minima, (std::vector<Rational>{Rational(1), Rational(1)}));
  EXPECT_EQ(r.witnesses, (std::vector<std::vector<std::int64_t>>{{1, 2}, {2, -1}}));
  EXPECT_EQ(r.s_index, 2);

  MinimaReport three = successive_minima(from_basis({{3, 0}, {0, 3}}), unit);
  EXPECT_EQ(three.minima, (std::vector<Rational>{Rational(3), Rational(3)}));
}

TEST(PointCount, Examples) {
  IntLattice Z2 = from_basis({{1, 0}, {0, 1}});
  BodySpec unit = make_sup_box({Rational(1), Rational(1)});
  EXPECT_EQ(lattice_point_count(Z2, unit, Rational(1)), 9u);
  EXPECT_EQ(lattice_point_count(Z2, unit, Rational(1, 1000)), 1u);

  IntLattice L = from_basis({{1, 2}, {0, 5}});
  BodySpec B = make_sup_box({Rational(2), Rational(2)});
  EXPECT_EQ(lattice_point_count(L, B, Rational(1)), 5u);
  std::uint64_t prev = 0;
  for (int k = 1; k <= 12; ++k) {
    std::uint64_t c = lattice_point_count(L, B, Rational(k, 4));
    EXPECT_GE(c, prev);
    prev = c;
  }
}

TEST(Minkowski, Examples) {
  IntLattice Z2 = from_basis({{1, 0}, {0, 1}});
  BodySpec unit = make_sup_box({Rational(1), Rational(1)});
  MinkowskiCertificate c = minkowski_certificate(successive_minima(Z2, unit), unit, Z2);
  EXPECT_EQ(c.product, Rational(4));
  EXPECT_EQ(c.lower_margin, Rational(2));
  EXPECT_EQ(c.upper_margin, Rational(1));

  IntLattice L = from_basis({{1, 2}, {0, 5}});
  BodySpec B = make_sup_box({Rational(2), Rational(2)});
  EXPECT_EQ(minkowski_certificate(successive_minima(L, B), B, L).product, Rational(16, 5));

  IntLattice half = from_basis({{1, 2}, {0, 5}}, 2);
  MinimaReport rh = successive_minima(half, B);
  EXPECT_EQ(rh.minima, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(minkowski_certificate(rh, B, half).product, Rational(16, 5));
}

TEST(Transference, Examples) {
  IntLattice Z2 = from_basis({{1, 0}, {0, 1}});
  BodySpec unit = make_sup_box({Rational(1), Rational(1)});
  TransferenceCertificate t = transference_certificate(successive_minima(Z2, unit),
                                                       successive_minima(dual_lattice(Z2), dual_body(unit)));
  EXPECT_EQ(t.products, (std::vector<Rational>{Rational(1), Rational(1)}));

  FieldParams f = make_field(7, 1);
  auto [L, B] = gamma_box(f, ff_from_code(f, 3), {2});
  TransferenceCertificate g =
      transference_certificate(successive_minima(L, B), successive_minima(dual_lattice(L), dual_body(B)));
  for (const auto& p : g.products) EXPECT_GE(p, Rational(1));

  // Scaling the lattice by 1/3 leaves the products unchanged.
  IntLattice s = from_basis(L.basis, 3);
  TransferenceCertificate gs =
      transference_certificate(successive_minima(s, B), successive_minima(dual_lattice(s), dual_body(B)));
  EXPECT_EQ(gs.products, g.products);
}

// Minima of Gamma(z) and of its dual against brute-force enumeration with
// a membership test derived from polynomial multiplication.
TEST(Minima, GammaBoxMatchesBruteForce) {
  std::mt19937_64 rng(17);
  for (auto [q, n, H] : std::vector<std::tuple<std::int64_t, int, std::vector<std::int64_t>>>{
           {7, 1, {3}}, {11, 1, {4}}, {5, 2, {3, 2}}, {7, 2, {2, 2}}}) {
    FieldParams f = make_field(q, n);
    for (int t = 0; t < 4; ++t) {
      std::int64_t code = 1 + static_cast<std::int64_t>(rng() % (f.order - 1));
      oracle::Vec zc = ff_from_code(f, code).coords;
      auto [L, B] = gamma_box(f, ff_from_code(f, code), H);
      std::int64_t hmin = *std::min_element(H.begin(), H.end());
      std::int64_t hmax = *std::max_element(H.begin(), H.end());

      oracle::Vec pb, db;
      for (int rep = 0; rep < 2; ++rep)
        for (auto h : H) {
          pb.push_back(q * h / hmin);
          db.push_back(q * hmax / h);
        }
      auto primal = oracle::minima_brute(2 * n, pb, [&](const oracle::Vec& u) { return gamma_member(f, zc, u); },
                                         [&](const oracle::Vec& u) { return sup_norm(u, H); });
      auto dual = oracle::minima_brute(
          2 * n, db, [&](const oracle::Vec& v) { return gamma_dual_member(f, zc, v); },
          [&](const oracle::Vec& v) {
            Rational s(0);
            for (int i = 0; i < 2 * n; ++i) s += Rational(std::abs(v[i]) * H[i % n], q);
            return s;
          });

      MinimaReport rp = successive_minima(L, B);
      MinimaReport rd = successive_minima(dual_lattice(L), dual_body(B));
      EXPECT_EQ(rp.minima, primal) << "q=" << q << " z=" << code;
      EXPECT_EQ(rd.minima, dual) << "q=" << q << " z=" << code;
    }
  }
}

TEST(Minima, OrderingIndependenceAndCounts) {
  FieldParams f = make_field(7, 2);
  for (std::int64_t code = 1; code < f.order; code += 5) {
    auto [L, B] = gamma_box(f, ff_from_code(f, code), {3, 2});
    MinimaReport r = successive_minima(L, B);
    ASSERT_EQ(r.minima.size(), 4u);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_LE(r.minima[j - 1], r.minima[j]);

    std::vector<std::vector<__int128>> rows;
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_TRUE(contains(L, r.witnesses[j]));
      EXPECT_EQ(B.norm(r.witnesses[j], 1), r.minima[j]);
      rows.emplace_back(r.witnesses[j].begin(), r.witnesses[j].end());
    }
    EXPECT_EQ(oracle::rank(rows), 4);

    // Strictly below lambda_j the points span at most j-1 dimensions.
    for (std::size_t j = 0; j < 4; ++j) {
      Rational below = r.minima[j] - Rational(1, 1000);
      std::vector<std::vector<__int128>> pts;
      detail::for_each_point(L, B, below, [&](const std::vector<std::int64_t>& u) {
        pts.emplace_back(u.begin(), u.end());
      });
      EXPECT_LE(oracle::rank(pts), static_cast<int>(j));
    }
    MinkowskiCertificate c = minkowski_certificate(r, B, L);
    EXPECT_GE(c.lower_margin, Rational(1));
    EXPECT_GE(c.upper_margin, Rational(1));
  }
}

TEST(Minima, Errors) {
  IntLattice L = from_basis({{1, 2}, {0, 5}});
  BodySpec B = make_sup_box({Rational(2), Rational(2)});
  EXPECT_EQ(kind_of([&] { successive_minima(L, B, Rational(1, 2)); }), ErrorKind::RadiusTooSmall);
  BodySpec huge = make_sup_box({Rational(100000), Rational(100000)});
  EXPECT_EQ(kind_of([&] { lattice_point_count(from_basis({{1, 0}, {0, 1}}), huge, Rational(1)); }),
            ErrorKind::BudgetExceeded);
  EXPECT_EQ(kind_of([] { make_sup_box({Rational(0)}); }), ErrorKind::InvalidArgument);
}

TEST(Minima, GenericRouteMatchesCongruenceRoute) {
  // Basis with composite exponent forces coefficient enumeration.
  IntLattice L = from_basis({{2, 1}, {0, 6}});
  ASSERT_FALSE(L.congruence.has_value());
  BodySpec B = make_sup_box({Rational(3), Rational(2)});
  auto brute = oracle::minima_brute(
      2, {20, 20}, [](const oracle::Vec& u) { return u[0] % 2 == 0 && oracle::md(u[1] - u[0] / 2, 6) == 0; },
      [](const oracle::Vec& u) { return max(Rational(std::abs(u[0]), 3), Rational(std::abs(u[1]), 2)); });
  EXPECT_EQ(successive_minima(L, B).minima, brute);
}
