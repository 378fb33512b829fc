// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cfem/numerics/polynomial.hpp"
#include "cfem/types.hpp"

namespace cfem::pade
{

// Largest element count whose denominator coefficients stay exact at the
// root finder's working precision.
inline constexpr int kMaxOrder = 64;

// Largest element count covered by the embedded reference table.
inline constexpr int kTableOrder = 16;

/// Denominator of the diagonal [n/n] Pade approximant of exp, in the variable
/// x = 2 L / L_j: coeffs[j] = (-1)^j (2n - j)! / (j! (n - j)!).
struct PadePolynomial
{
  int n = 0;
  std::vector<double> coeffs;                         // rounded to double
  std::vector<numerics::HighPrecisionReal> exact;     // exact integers
};

enum class Ordering
{
  phase_monotone,
  conjugate_interleaved,
  custom_permutation,
};

/// Complex element lengths of one CFEM interval.
struct PadeGrid
{
  int n = 0;
  double total_length = 0.0;
  std::vector<Complex> lengths;
  Ordering ordering = Ordering::phase_monotone;

  // Node coordinates x_0 = 0, x_i = L_1 + ... + L_i.
  std::vector<Complex> node_coordinates() const;
};

PadePolynomial pade_polynomial(int n);

// Lengths 2 L / x_j over the roots x_j of pade_polynomial(n), conjugate pairs
// symmetrized, sorted by increasing phase.
PadeGrid element_lengths(int n, double length);

PadeGrid order_phase_monotone(PadeGrid grid);

// Swaps every even position j <= n/2 of a phase-monotone grid with its mirror
// position n + 1 - j, so consecutive elements alternate the sign of Im L_j.
PadeGrid reorder_conjugate_interleave(PadeGrid grid);

// grid.lengths[perm[i]] becomes element i.
PadeGrid permute(const PadeGrid &grid, std::span<const std::size_t> perm);

// |sum L_j - L| / L.
double sum_defect(const PadeGrid &grid);

// max_i |Im x_i| over the node coordinates.
double max_abs_imag_coordinate(const PadeGrid &grid);

struct TableReport
{
  int n = 0;
  std::vector<Complex> reference;
  std::vector<double> deviation;  // |L_j - table_j| / |table_j| per table entry
  double max_deviation = 0.0;
  bool pass = false;
};

// Printed reference table entries (unit interval) expanded into conjugate pairs.
std::vector<Complex> reference_lengths(int n);

TableReport validate_against_table(int n);

}  // namespace cfem::pade
