// Copyright (c) 2026 The CFEM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cfem/numerics/eigen_dense.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cfem/errors.hpp"

namespace cfem::numerics
{

namespace
{

CMatrix solve_against(const CMatrix &b, const CMatrix &rhs, const char *what)
{
  if (b.rows() != b.cols() || b.rows() != rhs.rows())
  {
    throw DomainError(what);
  }
  Eigen::PartialPivLU<CMatrix> lu(b);
  const double rcond = lu.rcond();
  if (!std::isfinite(rcond) || rcond <= 16.0 * std::numeric_limits<double>::epsilon())
  {
    throw SingularityError(what);
  }
  return lu.solve(rhs);
}

EigenPairs standard_eig(const CMatrix &c, bool vectors)
{
  Eigen::ComplexEigenSolver<CMatrix> solver(c, vectors);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalError("dense eigensolver did not converge");
  }
  EigenPairs out;
  out.values = solver.eigenvalues();
  if (vectors)
  {
    out.vectors = solver.eigenvectors();
  }
  return out;
}

}  // namespace

CVector generalized_eig_dense(const CMatrix &a, const CMatrix &b)
{
  if (a.rows() == 0)
  {
    return CVector(0);
  }
  return standard_eig(solve_against(b, a, "generalized_eig_dense: B is singular"), false).values;
}

EigenPairs generalized_eig_dense_pairs(const CMatrix &a, const CMatrix &b)
{
  if (a.rows() == 0)
  {
    return {CVector(0), CMatrix(0, 0)};
  }
  return standard_eig(solve_against(b, a, "generalized_eig_dense: B is singular"), true);
}

EigenPairs quadratic_eig_dense(const CMatrix &q2, const CMatrix &q1, const CMatrix &q0)
{
  const Eigen::Index n = q2.rows();
  if (q1.rows() != n || q0.rows() != n || q2.cols() != n || q1.cols() != n || q0.cols() != n)
  {
    throw DomainError("quadratic_eig_dense: coefficient sizes differ");
  }
  // z = [v; s v]:  s z = [[0, I]; [-Q2^{-1} Q0, -Q2^{-1} Q1]] z
  CMatrix rhs(n, 2 * n);
  rhs << q0, q1;
  const CMatrix lower = -solve_against(q2, rhs, "quadratic_eig_dense: leading coefficient is singular");
  CMatrix companion = CMatrix::Zero(2 * n, 2 * n);
  companion.topRightCorner(n, n).setIdentity();
  companion.bottomRows(n) = lower;
  EigenPairs pairs = standard_eig(companion, true);
  pairs.vectors = pairs.vectors.topRows(n).eval();
  for (Eigen::Index j = 0; j < pairs.vectors.cols(); ++j)
  {
    const double nrm = pairs.vectors.col(j).norm();
    if (nrm > 0.0)
    {
      pairs.vectors.col(j) /= nrm;
    }
  }
  return pairs;
}

}  // namespace cfem::numerics
