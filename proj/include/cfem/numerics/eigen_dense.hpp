// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfem/types.hpp"

namespace cfem::numerics
{

struct EigenPairs
{
  CVector values;
  CMatrix vectors;  // column j belongs to values(j)
};

// Eigenvalues of A v = lambda B v through the standard reduction B^{-1} A.
// Throws SingularityError when B is numerically singular.
CVector generalized_eig_dense(const CMatrix &a, const CMatrix &b);
EigenPairs generalized_eig_dense_pairs(const CMatrix &a, const CMatrix &b);

// (s^2 Q2 + s Q1 + Q0) v = 0 by companion linearization to a 2N standard
// problem. Requires Q2 nonsingular, so every returned eigenvalue is finite.
EigenPairs quadratic_eig_dense(const CMatrix &q2, const CMatrix &q1, const CMatrix &q0);

}  // namespace cfem::numerics
