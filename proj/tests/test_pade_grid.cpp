// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "cfem/errors.hpp"
#include "cfem/pade_grid.hpp"

namespace
{

using namespace cfem;
using namespace cfem::pade;

// Element lengths on the unit interval from 60-digit roots of the Pade
// denominator (mpmath polyroots), sorted by phase.
const std::vector<Complex> kRootsN8 = {
    {0.05861791492234341163, -0.13119236974564779914}, {0.11325833004972813721, -0.11445496413906212549},
    {0.153377947718823998, -0.077094303538954550168},  {0.17474580730910445316, -0.027132261737692609889},
    {0.17474580730910445316, 0.027132261737692609889}, {0.153377947718823998, 0.077094303538954550168},
    {0.11325833004972813721, 0.11445496413906212549},  {0.05861791492234341163, 0.13119236974564779914},
};

const std::vector<Complex> kRootsN16 = {
    {0.017962664963409400267, -0.066941623666299890848}, {0.034718095074923111798, -0.067179644708357907765},
    {0.04960794930664874276, -0.063278034872740689539},  {0.062683982070612604376, -0.056171885398161176527},
    {0.073659573798206019914, -0.046458584789261848335}, {0.08221667332433108369, -0.03468717800903489801},
    {0.088083746203028506191, -0.021419581162429157487}, {0.091067315258840531004, -0.0072417509121176464702},
    {0.091067315258840531004, 0.0072417509121176464702}, {0.088083746203028506191, 0.021419581162429157487},
    {0.08221667332433108369, 0.03468717800903489801},    {0.073659573798206019914, 0.046458584789261848335},
    {0.062683982070612604376, 0.056171885398161176527},  {0.04960794930664874276, 0.063278034872740689539},
    {0.034718095074923111798, 0.067179644708357907765},  {0.017962664963409400267, 0.066941623666299890848},
};

double max_rel_deviation(const std::vector<Complex> &a, const std::vector<Complex> &b)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  }
  return worst;
}

std::vector<Complex> sorted(std::vector<Complex> v)
{
  std::sort(v.begin(), v.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return v;
}

TEST(PadePolynomial, SmallOrders)
{
  EXPECT_EQ(pade_polynomial(1).coeffs, (std::vector<double>{2.0, -1.0}));
  EXPECT_EQ(pade_polynomial(2).coeffs, (std::vector<double>{12.0, -6.0, 1.0}));
  EXPECT_EQ(pade_polynomial(3).coeffs, (std::vector<double>{120.0, -60.0, 12.0, -1.0}));
}

TEST(PadePolynomial, EndCoefficients)
{
  for (int n = 1; n <= 16; ++n)
  {
    const auto p = pade_polynomial(n);
    ASSERT_EQ(static_cast<int>(p.coeffs.size()), n + 1);
    double ratio = 1.0;  // (2n)! / n!
    for (int i = n + 1; i <= 2 * n; ++i)
    {
      ratio *= i;
    }
    EXPECT_EQ(p.coeffs.front(), ratio) << n;
    EXPECT_EQ(p.coeffs.back(), (n % 2 == 0) ? 1.0 : -1.0) << n;
    for (const double c : p.coeffs)
    {
      EXPECT_EQ(c, std::round(c));
    }
  }
}

TEST(PadePolynomial, DomainErrors)
{
  EXPECT_THROW(pade_polynomial(0), DomainError);
  EXPECT_THROW(pade_polynomial(kMaxOrder + 1), DomainError);
  EXPECT_THROW(element_lengths(0, 1.0), DomainError);
  EXPECT_THROW(element_lengths(3, 0.0), DomainError);
  EXPECT_THROW(element_lengths(3, -1.0), DomainError);
}

TEST(ElementLengths, SmallOrders)
{
  const auto g1 = element_lengths(1, 1.0);
  ASSERT_EQ(g1.lengths.size(), 1u);
  EXPECT_NEAR(std::abs(g1.lengths[0] - 1.0), 0.0, 1e-15);

  const auto g2 = element_lengths(2, 1.0);
  ASSERT_EQ(g2.lengths.size(), 2u);
  EXPECT_NEAR(std::abs(g2.lengths[0] - Complex(0.5, -0.28867513459481)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(g2.lengths[1] - Complex(0.5, 0.28867513459481)), 0.0, 1e-13);
  EXPECT_EQ(g2.ordering, Ordering::phase_monotone);

  const auto g3 = element_lengths(3, 1.0);
  const bool has_real = std::any_of(g3.lengths.begin(), g3.lengths.end(), [](Complex l) {
    return l.imag() == 0.0 && std::abs(l.real() - 0.430629) < 1e-6;
  });
  EXPECT_TRUE(has_real);
}

TEST(ElementLengths, MatchesHighPrecisionRoots)
{
  const auto g8 = element_lengths(8, 1.0);
  EXPECT_LE(max_rel_deviation(g8.lengths, kRootsN8), 1e-14);
  const auto g16 = element_lengths(16, 1.0);
  EXPECT_LE(max_rel_deviation(g16.lengths, kRootsN16), 1e-14);
}

TEST(ElementLengths, ScalesWithLength)
{
  const auto g = element_lengths(4, 1.0);
  const auto g2 = element_lengths(4, 2.0);
  for (std::size_t j = 0; j < g.lengths.size(); ++j)
  {
    EXPECT_LE(std::abs(g2.lengths[j] - 2.0 * g.lengths[j]), 1e-15 * std::abs(g2.lengths[j]));
  }
  const auto table = reference_lengths(4);
  const auto scaled = sorted(g2.lengths);
  auto expect = table;
  for (auto &t : expect)
  {
    t *= 2.0;
  }
  expect = sorted(expect);
  EXPECT_LE(max_rel_deviation(scaled, expect), 1e-12);
}

TEST(ElementLengths, GridInvariants)
{
  for (const double len : {0.3, 1.0, 7.5})
  {
    for (int n = 1; n <= 16; ++n)
    {
      const auto g = element_lengths(n, len);
      EXPECT_LE(sum_defect(g), 1e-13) << n;
      int real_count = 0;
      for (const Complex l : g.lengths)
      {
        EXPECT_GT(l.real(), 0.0);
        if (l.imag() == 0.0)
        {
          ++real_count;
          continue;
        }
        const auto partner = std::min_element(g.lengths.begin(), g.lengths.end(), [&](Complex a, Complex b) {
          return std::abs(a - std::conj(l)) < std::abs(b - std::conj(l));
        });
        EXPECT_LE(std::abs(*partner - std::conj(l)), 1e-13 * std::abs(l));
      }
      EXPECT_EQ(real_count, n % 2) << n;
    }
  }
}

TEST(ElementLengths, HighOrdersStillValid)
{
  for (const int n : {24, 40, 60})
  {
    const auto g = element_lengths(n, 1.0);
    EXPECT_LE(sum_defect(g), 1e-13) << n;
    for (const Complex l : g.lengths)
    {
      EXPECT_GT(l.real(), 0.0);
    }
  }
}

TEST(Table, ValidationReport)
{
  const auto r1 = validate_against_table(1);
  EXPECT_EQ(r1.max_deviation, 0.0);
  EXPECT_TRUE(r1.pass);
  const auto r7 = validate_against_table(7);
  EXPECT_TRUE(r7.pass);
  const auto table7 = reference_lengths(7);
  EXPECT_TRUE(std::any_of(table7.begin(), table7.end(),
                          [](Complex l) { return l == Complex(0.20113492964499, 0.0); }));
  const auto g7 = element_lengths(7, 1.0);
  EXPECT_TRUE(std::any_of(g7.lengths.begin(), g7.lengths.end(),
                          [](Complex l) { return std::abs(l - 0.20113492964499) < 1e-13; }));
  EXPECT_THROW(reference_lengths(17), DomainError);
}

// The printed table agrees with the exact roots to its own double-precision
// accuracy, which degrades with the root condition number.
TEST(Table, PrintedValuesCloseToExactRoots)
{
  for (int n = 1; n <= 16; ++n)
  {
    EXPECT_LE(validate_against_table(n).max_deviation, 1e-7) << n;
  }
}

TEST(Ordering, PhaseMonotone)
{
  for (const int n : {1, 2, 5, 9, 16})
  {
    auto g = element_lengths(n, 1.0);
    for (std::size_t j = 1; j < g.lengths.size(); ++j)
    {
      EXPECT_LE(std::arg(g.lengths[j - 1]), std::arg(g.lengths[j]));
    }
    std::mt19937 rng(static_cast<unsigned>(n));
    std::vector<std::size_t> perm(g.lengths.size());
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto shuffled = permute(g, perm);
    EXPECT_EQ(shuffled.ordering, Ordering::custom_permutation);
    const auto back = order_phase_monotone(shuffled);
    EXPECT_EQ(back.lengths, g.lengths);
  }
  EXPECT_THROW(order_phase_monotone(PadeGrid{}), DomainError);
}

TEST(Ordering, PermuteRejectsBadPermutation)
{
  const auto g = element_lengths(3, 1.0);
  EXPECT_THROW(permute(g, std::vector<std::size_t>{0, 1}), DomainError);
  EXPECT_THROW(permute(g, std::vector<std::size_t>{0, 1, 1}), DomainError);
}

TEST(Ordering, InterleaveSmallCases)
{
  const auto g1 = element_lengths(1, 1.0);
  EXPECT_EQ(reorder_conjugate_interleave(g1).lengths, g1.lengths);
  // For n = 2 the only left-half position is odd, so the conjugate-first
  // phase order is kept.
  const auto g2 = element_lengths(2, 1.0);
  const auto r2 = reorder_conjugate_interleave(g2);
  EXPECT_EQ(r2.lengths, g2.lengths);
  EXPECT_LT(r2.lengths[0].imag(), 0.0);
  EXPECT_EQ(r2.ordering, Ordering::conjugate_interleaved);
}

TEST(Ordering, InterleaveSwapsEvenLeftPositions)
{
  const auto g = element_lengths(10, 1.0);
  const auto r = reorder_conjugate_interleave(g);
  for (std::size_t j = 1; j <= 10; ++j)
  {
    const bool swapped_left = j <= 5 && j % 2 == 0;
    const bool swapped_right = j > 5 && (11 - j) % 2 == 0;
    const std::size_t src = (swapped_left || swapped_right) ? 10 - j : j - 1;
    EXPECT_EQ(r.lengths[j - 1], g.lengths[src]) << j;
  }
  EXPECT_EQ(sorted(r.lengths), sorted(g.lengths));
  EXPECT_THROW(reorder_conjugate_interleave(r), DomainError);
}

TEST(Ordering, InterleaveShrinksImaginaryEnvelope)
{
  for (int n = 4; n <= 40; ++n)
  {
    const auto g = element_lengths(n, 1.0);
    const auto r = reorder_conjugate_interleave(g);
    EXPECT_LT(max_abs_imag_coordinate(r), max_abs_imag_coordinate(g)) << n;
    EXPECT_LE(sum_defect(r), 1e-13);
  }
}

TEST(Ordering, NodeCoordinatesEndOnLength)
{
  const auto g = element_lengths(9, 3.0);
  const auto x = g.node_coordinates();
  ASSERT_EQ(x.size(), 10u);
  EXPECT_EQ(x.front(), Complex(0.0, 0.0));
  EXPECT_LE(std::abs(x.back() - 3.0), 1e-13 * 3.0);
}

}  // namespace
