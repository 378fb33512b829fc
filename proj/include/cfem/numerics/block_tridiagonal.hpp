// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/LU>

#include "cfem/types.hpp"

namespace cfem::numerics
{

/// Complex symmetric block-tridiagonal matrix with square blocks of equal size.
///
/// Only the diagonal blocks and the sub-diagonal blocks A(i+1, i) are stored;
/// the super-diagonal block A(i, i+1) is the transpose of sub(i), so the full
/// matrix equals its transpose whenever the diagonal blocks are symmetric.
class BlockTridiagonalMatrix
{
public:
  BlockTridiagonalMatrix(Eigen::Index num_blocks, Eigen::Index block_size);

  Eigen::Index num_blocks() const { return static_cast<Eigen::Index>(diag_.size()); }
  Eigen::Index block_size() const { return block_size_; }
  Eigen::Index size() const { return num_blocks() * block_size_; }

  CMatrix &diag(Eigen::Index i) { return diag_[static_cast<std::size_t>(i)]; }
  const CMatrix &diag(Eigen::Index i) const { return diag_[static_cast<std::size_t>(i)]; }
  CMatrix &sub(Eigen::Index i) { return sub_[static_cast<std::size_t>(i)]; }
  const CMatrix &sub(Eigen::Index i) const { return sub_[static_cast<std::size_t>(i)]; }

  // Adds a symmetric 2m x 2m element matrix coupling block columns i and i+1.
  void add_element(Eigen::Index i, const CMatrix &element);

  CVector multiply(const CVector &x) const;
  CMatrix to_dense() const;
  double norm() const;  // Frobenius

private:
  Eigen::Index block_size_;
  std::vector<CMatrix> diag_;
  std::vector<CMatrix> sub_;
};

/// Block LU factorization without pivoting across blocks (partial pivoting
/// inside each pivot block). The factorization keeps a pointer to the matrix
/// for iterative refinement; the matrix must outlive it.
class BlockTridiagonalLU
{
public:
  // Throws SingularityError naming the first singular pivot block.
  explicit BlockTridiagonalLU(const BlockTridiagonalMatrix &a);

  // Forward/back substitution followed by one step of iterative refinement.
  CVector solve(const CVector &b) const;

private:
  CVector substitute(const CVector &b) const;

  const BlockTridiagonalMatrix *a_;
  std::vector<Eigen::PartialPivLU<CMatrix>> pivots_;
  std::vector<CMatrix> coupling_;  // pivot(i)^{-1} * A(i, i+1)
};

CVector block_tridiag_solve(const BlockTridiagonalMatrix &a, const CVector &b);

}  // namespace cfem::numerics
