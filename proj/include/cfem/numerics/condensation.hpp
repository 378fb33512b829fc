// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

#include "cfem/numerics/block_tridiagonal.hpp"
#include "cfem/types.hpp"

namespace cfem::numerics
{

/// Boundary stiffness of a segment whose interior has been condensed out:
/// [f_left; f_right] = [[left, coupling^T]; [coupling, right]] [u_left; u_right].
struct TwoPort
{
  CMatrix left;
  CMatrix right;
  CMatrix coupling;  // block (right, left)
};

// Splits a symmetric 2m x 2m element matrix into its two-port form.
TwoPort two_port_from_element(const CMatrix &element);

// Joins two segments at a shared node and eliminates that node.
TwoPort cascade(const TwoPort &first, const TwoPort &second);

// Chain of `count` identical segments, by repeated doubling.
TwoPort cascade_power(const TwoPort &segment, std::size_t count);

// Schur complement of `a` onto the listed dofs (global indices, in the given
// order). The result is symmetrized; roundoff is the only asymmetry removed.
CMatrix schur_complement_boundary(const BlockTridiagonalMatrix &a,
                                  std::span<const Eigen::Index> boundary);

}  // namespace cfem::numerics
