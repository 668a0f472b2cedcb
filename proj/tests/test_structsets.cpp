#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "multeq/structsets.hpp"

using namespace multeq;

namespace {

std::vector<std::int64_t> coords_of(const FieldParams& f, const ElementSet& s) {
  std::vector<std::int64_t> flat;
  for (auto c : s.elements)
    for (auto x : ff_from_code(f, c).coords) flat.push_back(x);
  return flat;
}

// Direct complex summation over tuples.
std::complex<double> fourier_direct(std::int64_t q, const GapSpec& spec, std::int64_t y) {
  std::complex<double> acc = 0;
  for_each_gap_tuple(q, spec, [&](const auto&, std::int64_t v) {
    acc += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>((v * y) % q) / q);
    return true;
  });
  return acc / static_cast<double>(q);
}

}  // namespace

TEST(Box, Examples) {
  FieldParams f7 = make_field(7, 1);
  EXPECT_EQ(enumerate_box(f7, {{0}, {3}}).elements, (std::vector<std::int64_t>{1, 2, 3}));

  FieldParams f4 = make_field(2, 2);
  ElementSet b = enumerate_box(f4, {{0, 0}, {1, 1}});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(ff_from_code(f4, b.elements[0]).coords, (std::vector<std::int64_t>{1, 1}));

  FieldParams f5 = make_field(5, 2, Poly{2, 0, 1});
  ElementSet b5 = enumerate_box(f5, {{1, 1}, {2, 2}});
  EXPECT_EQ(b5.size(), 4u);
  // Codes sort by second coordinate first: (2,2),(3,2),(2,3),(3,3).
  EXPECT_EQ(coords_of(f5, b5), (std::vector<std::int64_t>{2, 2, 3, 2, 2, 3, 3, 3}));
}

TEST(Box, SideExceedsModulus) {
  try {
    enumerate_box(make_field(5, 1), {{0}, {6}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SideExceedsModulus);
  }
}

TEST(Box, CardinalityIsProductOfSides) {
  std::mt19937_64 rng(3);
  for (auto [q, n] : std::vector<std::pair<std::int64_t, int>>{{5, 2}, {7, 2}, {3, 3}, {11, 1}}) {
    FieldParams f = make_field(q, n);
    for (int t = 0; t < 30; ++t) {
      BoxSpec s;
      std::uint64_t prod = 1;
      for (int i = 0; i < n; ++i) {
        s.M.push_back(static_cast<std::int64_t>(rng() % 20));
        s.H.push_back(1 + static_cast<std::int64_t>(rng() % q));
        prod *= s.H.back();
      }
      EXPECT_EQ(enumerate_box(f, s).size(), prod);
    }
  }
}

TEST(Box, MonotoneFlag) {
  EXPECT_TRUE((BoxSpec{{0, 0}, {3, 2}}.monotone_H(5)));
  EXPECT_FALSE((BoxSpec{{0, 0}, {2, 3}}.monotone_H(5)));
  EXPECT_FALSE((BoxSpec{{0, 0}, {6, 2}}.monotone_H(5)));
}

TEST(Gap, Examples) {
  EXPECT_EQ(enumerate_gap(7, {{1}, 3}).elements, (std::vector<std::int64_t>{1, 2, 3}));
  ElementSet g = enumerate_gap(13, {{1, 3}, 2});
  EXPECT_EQ(g.elements, (std::vector<std::int64_t>{4, 5, 7, 8}));
  ElementSet c = enumerate_gap(5, {{1, 1}, 3});
  EXPECT_EQ(c.multiplicity_total, 9u);
  EXPECT_EQ(c.size(), 5u);
}

TEST(Gap, SymmetricMultiplicity) {
  GapSpec s{{1, 10}, 3, 0, true, 2};
  EXPECT_EQ(enumerate_gap(101, s).multiplicity_total, 25u);
}

TEST(Gap, Properness) {
  EXPECT_TRUE(is_proper(13, {{1, 3}, 2}).proper);
  ProperResult r = is_proper(5, {{1, 1}, 3});
  ASSERT_FALSE(r.proper);
  EXPECT_EQ(r.witness->first, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(r.witness->second, (std::vector<std::int64_t>{2, 1}));
  EXPECT_TRUE(is_proper(101, GapSpec{{1, 10}, 3, 0, true, 4}).proper);
}

// With |h_i| <= 9 the tuples (5,0) and (-5,1) both give 5, so the
// symmetric progression is not proper even though no |h_i| <= 9 kernel
// relation exists.
TEST(Gap, SymmetricCollisionNeedsDoubleRange) {
  GapSpec s{{1, 10}, 3, 0, true, 9};
  ProperResult r = is_proper(101, s);
  ASSERT_FALSE(r.proper);
  auto value = [](const std::vector<std::int64_t>& h) { return ((h[0] + 10 * h[1]) % 101 + 101) % 101; };
  EXPECT_NE(r.witness->first, r.witness->second);
  EXPECT_EQ(value(r.witness->first), value(r.witness->second));
  EXPECT_LT(enumerate_gap(101, s).size(), enumerate_gap(101, s).multiplicity_total);
}

TEST(Bohr, Examples) {
  EXPECT_EQ(enumerate_bohr(7, {{1}, {Rational(1, 5)}}).elements, (std::vector<std::int64_t>{1, 6}));
  EXPECT_EQ(enumerate_bohr(31, {{4, 9}, {Rational(1, 2), Rational(1, 2)}}).size(), 30u);
  EXPECT_EQ(enumerate_bohr(11, {{1, 2}, {Rational(1, 11), Rational(1, 11)}}).size(), 0u);
}

TEST(Bohr, Symmetry) {
  for (std::int64_t q : {7, 11, 31, 101})
    for (std::int64_t a : {1, 2, 5})
      for (auto eps : {Rational(1, 10), Rational(1, 4), Rational(1, 3)}) {
        ElementSet b = enumerate_bohr(q, {{a, 3}, {eps, Rational(1, 3)}});
        for (auto x : b.elements) EXPECT_TRUE(b.contains(q - x));
      }
}

TEST(Bohr, Monotone) {
  std::vector<Rational> ladder{Rational(0), Rational(1, 20), Rational(1, 7), Rational(1, 4), Rational(1, 2)};
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    ElementSet small = enumerate_bohr(101, {{3, 7}, {ladder[i], ladder[i]}});
    ElementSet big = enumerate_bohr(101, {{3, 7}, {ladder[i + 1], ladder[i]}});
    for (auto x : small.elements) EXPECT_TRUE(big.contains(x));
  }
}

TEST(Bohr, RejectsLargeEps) {
  EXPECT_THROW(enumerate_bohr(7, {{1}, {Rational(2, 3)}}), Error);
}

TEST(Fourier, Examples) {
  GapSpec s{{1}, 3};
  EXPECT_NEAR(gap_fourier(7, s, 0).magnitude, 3.0 / 7, 1e-12);
  double expect = std::abs(std::sin(3 * std::numbers::pi / 7) / std::sin(std::numbers::pi / 7)) / 7;
  EXPECT_NEAR(gap_fourier(7, s, 1).magnitude, expect, 1e-12);
  EXPECT_NEAR(expect, 0.32100, 1e-5);
  EXPECT_NEAR(gap_fourier(7, {{1}, 7}, 1).magnitude, 0.0, 1e-12);
}

TEST(Fourier, MatchesDirectSummation) {
  for (std::int64_t q : {7, 13, 101})
    for (const GapSpec& s : {GapSpec{{1}, 3}, GapSpec{{1, 3}, 2, 5}, GapSpec{{2, 5}, 3, 1}})
      for (std::int64_t y = 0; y < q; ++y) {
        auto direct = fourier_direct(q, s, y);
        auto fast = gap_fourier(q, s, y).value;
        ASSERT_NEAR(std::abs(direct - fast), 0.0, 1e-12) << "q=" << q << " y=" << y;
      }
}

TEST(Fourier, ParsevalAndCertificate) {
  for (std::int64_t q : {101, 199})
    for (const GapSpec& s : {GapSpec{{1}, 3}, GapSpec{{1, 10}, 2}, GapSpec{{1, 20}, 3}}) {
      if (!is_proper(q, s).proper) continue;
      double sum = 0;
      for (std::int64_t y = 0; y < q; ++y) {
        FourierValue v = gap_fourier(q, s, y);
        sum += v.magnitude * v.magnitude;
        if (y != 0) EXPECT_LE(v.certificate, 1 + 1e-12);
      }
      EXPECT_NEAR(sum, static_cast<double>(enumerate_gap(q, s).size()) / q, 1e-9);
    }
}

TEST(Fourier, ParsevalWithCollapseUsesMultiplicities) {
  GapSpec s{{1, 1}, 3};
  auto m = gap_multiplicities(5, s);
  double mass = 0;
  for (auto c : m) mass += static_cast<double>(c * c);
  double sum = 0;
  for (std::int64_t y = 0; y < 5; ++y) sum += std::norm(gap_fourier(5, s, y).value);
  EXPECT_NEAR(sum, mass / 5, 1e-9);
}
