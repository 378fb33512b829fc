// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfem/pade_grid.hpp"
#include "cfem/types.hpp"

/// Midpoint-integrated linear elements for -u'' + lambda u = 0 on one interval:
/// element and whole-mesh Dirichlet-to-Neumann maps, Crank-Nicolson
/// propagators, exact references and two-point solves.
namespace cfem::scalar
{

// Principal square root with Re >= 0; negative reals map to +i sqrt(|lambda|).
Complex principal_sqrt(Complex lambda);

struct SpectralParameter
{
  Complex lambda;
  Complex k;  // principal_sqrt(lambda)

  static SpectralParameter from_lambda(Complex lambda);
  // Helmholtz: lambda = -omega^2.
  static SpectralParameter from_frequency(double omega);
};

/// Stiffness of one midpoint-integrated element:
/// [[k_diag, k_off], [k_off, k_diag]] with k_diag = 1/L + lambda L/4 and
/// k_off = -1/L + lambda L/4, so k_diag^2 - k_off^2 = lambda for any L.
struct ElementDtN
{
  Complex k_diag;
  Complex k_off;
  Complex length;
  Complex lambda;
};

/// Two-point DtN map [-v_0; v_L] = K [u_0; u_L]. k_diag_end is the (L, L)
/// entry, equal to k_diag for any mesh built from fixed-point elements.
struct DtNMap2
{
  Complex k_diag;
  Complex k_off;
  Complex k_diag_end;
};

/// Symmetric tridiagonal assembly of element_dtn blocks, dimension n + 1.
struct AssembledSystem1D
{
  std::vector<Complex> diag;
  std::vector<Complex> offdiag;
  pade::PadeGrid grid;
  Complex lambda;

  std::size_t dim() const { return diag.size(); }
};

struct TwoPointSolution
{
  Complex u0;
  std::vector<Complex> interior;  // diagnostic only
  Complex uL;
};

ElementDtN element_dtn(Complex length, Complex lambda);

// (1 + kL/2) / (1 - kL/2)
Complex element_propagator(Complex length, Complex k);

// Matrix carrying (u, v/k) across one element by the Crank-Nicolson step.
Eigen::Matrix2cd element_propagator_matrix(Complex length, Complex k);

// Two-point DtN map of an interval from its (u, v/k) propagator matrix.
DtNMap2 dtn_from_propagator(const Eigen::Matrix2cd &propagator, Complex k);

Complex mesh_propagator(const pade::PadeGrid &grid, Complex k);

DtNMap2 exact_dtn(Complex lambda, double length);

Complex exact_propagator(Complex k, double length);

AssembledSystem1D assemble_1d(const pade::PadeGrid &grid, Complex lambda);

// Static condensation of assemble_1d onto the two end nodes.
DtNMap2 condense_dtn(const pade::PadeGrid &grid, Complex lambda);

// Flux `left_neumann` (= -u'(0)) on the left, u(L) = right_dirichlet.
TwoPointSolution solve_two_point(const pade::PadeGrid &grid, Complex lambda, Complex left_neumann,
                                 Complex right_dirichlet);

// |a - b| / (|a| + |b|), zero when both vanish.
double relative_error(Complex exact, Complex approx);

// |K_hs - (k_diag - k_off^2 / (k_diag + K_hs))| with K_hs = sqrt(lambda).
double halfspace_fixed_point_check(const ElementDtN &element);

// Eigenvalues of the assembled stiffness with respect to the assembled
// midpoint mass, with both end nodes constrained (n - 1 interior nodes;
// empty for n = 1).
CVector generalized_spectrum(const pade::PadeGrid &grid);

// Re k > 0 implies |P| > 1 and Re k < 0 implies |P| < 1.
bool propagator_magnitude_lemma_check(const pade::PadeGrid &grid, Complex k);

}  // namespace cfem::scalar
