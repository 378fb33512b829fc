// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/numerics/block_tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cfem/errors.hpp"

namespace cfem::numerics
{

BlockTridiagonalMatrix::BlockTridiagonalMatrix(Eigen::Index num_blocks, Eigen::Index block_size)
  : block_size_(block_size)
{
  if (num_blocks < 1 || block_size < 1)
  {
    throw DomainError("BlockTridiagonalMatrix: need at least one block of positive size");
  }
  diag_.assign(static_cast<std::size_t>(num_blocks), CMatrix::Zero(block_size, block_size));
  sub_.assign(static_cast<std::size_t>(num_blocks - 1), CMatrix::Zero(block_size, block_size));
}

void BlockTridiagonalMatrix::add_element(Eigen::Index i, const CMatrix &element)
{
  const Eigen::Index m = block_size_;
  if (element.rows() != 2 * m || element.cols() != 2 * m)
  {
    throw DomainError("BlockTridiagonalMatrix::add_element: element size does not match blocks");
  }
  if (i < 0 || i + 1 >= num_blocks())
  {
    throw DomainError("BlockTridiagonalMatrix::add_element: block column out of range");
  }
  diag(i) += element.topLeftCorner(m, m);
  diag(i + 1) += element.bottomRightCorner(m, m);
  sub(i) += element.bottomLeftCorner(m, m);
}

CVector BlockTridiagonalMatrix::multiply(const CVector &x) const
{
  const Eigen::Index m = block_size_;
  CVector y(size());
  for (Eigen::Index i = 0; i < num_blocks(); ++i)
  {
    auto yi = y.segment(i * m, m);
    yi.noalias() = diag(i) * x.segment(i * m, m);
    if (i > 0)
    {
      yi.noalias() += sub(i - 1) * x.segment((i - 1) * m, m);
    }
    if (i + 1 < num_blocks())
    {
      yi.noalias() += sub(i).transpose() * x.segment((i + 1) * m, m);
    }
  }
  return y;
}

CMatrix BlockTridiagonalMatrix::to_dense() const
{
  const Eigen::Index m = block_size_;
  CMatrix a = CMatrix::Zero(size(), size());
  for (Eigen::Index i = 0; i < num_blocks(); ++i)
  {
    a.block(i * m, i * m, m, m) = diag(i);
    if (i + 1 < num_blocks())
    {
      a.block((i + 1) * m, i * m, m, m) = sub(i);
      a.block(i * m, (i + 1) * m, m, m) = sub(i).transpose();
    }
  }
  return a;
}

double BlockTridiagonalMatrix::norm() const
{
  double sum = 0.0;
  for (const auto &d : diag_)
  {
    sum += d.squaredNorm();
  }
  for (const auto &s : sub_)
  {
    sum += 2.0 * s.squaredNorm();
  }
  return std::sqrt(sum);
}

BlockTridiagonalLU::BlockTridiagonalLU(const BlockTridiagonalMatrix &a) : a_(&a)
{
  const Eigen::Index nb = a.num_blocks();
  pivots_.reserve(static_cast<std::size_t>(nb));
  coupling_.reserve(static_cast<std::size_t>(nb - 1));

  CMatrix pivot = a.diag(0);
  for (Eigen::Index i = 0; i < nb; ++i)
  {
    Eigen::PartialPivLU<CMatrix> lu(pivot);
    const double rcond = lu.rcond();
    if (!std::isfinite(rcond) || rcond <= 16.0 * std::numeric_limits<double>::epsilon())
    {
      throw SingularityError("block_tridiag_solve: singular pivot block at index " +
                             std::to_string(i));
    }
    if (i + 1 < nb)
    {
      coupling_.push_back(lu.solve(CMatrix(a.sub(i).transpose())));
      pivot = a.diag(i + 1);
      pivot.noalias() -= a.sub(i) * coupling_.back();
    }
    pivots_.push_back(std::move(lu));
  }
}

CVector BlockTridiagonalLU::substitute(const CVector &b) const
{
  const Eigen::Index m = a_->block_size();
  const Eigen::Index nb = a_->num_blocks();
  CVector y(b.size());
  CVector rhs = b.segment(0, m);
  for (Eigen::Index i = 0; i < nb; ++i)
  {
    y.segment(i * m, m) = pivots_[static_cast<std::size_t>(i)].solve(rhs);
    if (i + 1 < nb)
    {
      rhs = b.segment((i + 1) * m, m);
      rhs.noalias() -= a_->sub(i) * y.segment(i * m, m);
    }
  }
  for (Eigen::Index i = nb - 1; i-- > 0;)
  {
    y.segment(i * m, m) -= coupling_[static_cast<std::size_t>(i)] * y.segment((i + 1) * m, m);
  }
  return y;
}

CVector BlockTridiagonalLU::solve(const CVector &b) const
{
  if (b.size() != a_->size())
  {
    throw DomainError("block_tridiag_solve: right-hand side size mismatch");
  }
  CVector x = substitute(b);
  const CVector r = b - a_->multiply(x);
  x += substitute(r);
  return x;
}

CVector block_tridiag_solve(const BlockTridiagonalMatrix &a, const CVector &b)
{
  if (b.size() != a.size())
  {
    throw DomainError("block_tridiag_solve: right-hand side size mismatch");
  }
  return BlockTridiagonalLU(a).solve(b);
}

}  // namespace cfem::numerics
